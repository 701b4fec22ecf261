//! Archimedean copulas `C(u) = phi(sum_i phi^{-1}(u_i))` built from Laplace
//! transforms, and their tail behaviour.
//!
//! * [`generators`]: catalog of generators with log-domain kernels,
//!   derivatives and declared tail regimes.
//! * [`copula`]: distribution function, its logarithm and the upper joint
//!   exceedance probability.
//! * [`tail_theory`]: closed-form tail dependence functions and profiles.
//! * [`tail_numeric`]: extrapolated limits and regime checks.
//! * [`sampling`]: scale-mixture simulation and empirical tail estimates.
//!
//! Every routine is generic over [`Real`] (`f32` or `f64`).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod copula;
pub mod error;
pub mod generators;
pub mod sampling;
pub mod scalar;
pub mod tail_numeric;
pub mod tail_theory;

pub use copula::{
    copula_cdf, log_copula_cdf, upper_joint_exceed, UnitVector, WeightVector, MAX_DIM,
};
pub use error::{Error, Result};
pub use generators::{CustomGenerator, FamilyKind, Generator, PowerScale, Regime};
pub use sampling::{sample_copula, sample_mixing, sample_mixture, BatchKind, SampleBatch};
pub use scalar::Real;
pub use tail_theory::{theoretical_profile, TailConstant, TailProfile};

pub type Generator64 = Generator<f64>;
pub type Generator32 = Generator<f32>;
pub type SampleBatch64 = SampleBatch<f64>;
