//! Numeric limits behind the tail theory: tail order, tail dependence, `tau`,
//! variation index, and the regime-defining checks.

mod checks;
mod classify;
mod estimators;
mod limits;

pub use checks::{
    check_complete_monotonicity, check_gamma_class, check_self_neglecting, check_sv_inverse_rapid,
    CmReport, CmViolation, GammaPoint, GammaReport, ScaleRatio, SelfNeglectPoint,
    SelfNeglectReport, SvInverseReport, SvInverseSeries, CM_TOLERANCE, SV_RATIO_BOUND,
};
pub use classify::{classify_regime_numeric, Classification, Evidence, RV_INDEX_RANGE};
pub use estimators::{
    estimate_rv_index, estimate_tail_dependence, estimate_tail_order, estimate_tau,
    estimate_upper_exponent, Divergence, RvIndexEstimate, TauOutcome, Trend, DIVERGENCE_THRESHOLD,
    VANISHING_INDEX,
};
pub use limits::{LimitEstimate, Method};

use crate::generators::{FamilyKind, Generator};
use crate::scalar::{geometric_grid, Real};

/// Default convergence tolerance for tail orders and tail-dependence limits.
pub const LIMIT_TOLERANCE: f64 = 1e-3;
/// Default convergence tolerance for `tau`.
pub const TAU_TOLERANCE: f64 = 1e-6;

/// `u` grid from `1e-2` down to `1e-10`, ratio 10.
pub fn default_u_grid_standard<T: Real>() -> Vec<T> {
    geometric_grid(T::lit(1e-2), T::lit(1e-10), 9)
}

/// `u` grid from `0.5` down to `0.02` for slowly varying generators.
pub fn default_sv_u_grid<T: Real>() -> Vec<T> {
    geometric_grid(T::lit(0.5), T::lit(0.02), 6)
}

/// Default `u` grid for a generator.
pub fn default_u_grid<T: Real>(g: &Generator<T>) -> Vec<T> {
    if g.kind() == FamilyKind::LogSv {
        default_sv_u_grid()
    } else {
        default_u_grid_standard()
    }
}

/// `t` grid from 1 to `1e8`, ratio 10.
pub fn default_t_grid<T: Real>() -> Vec<T> {
    geometric_grid(T::one(), T::lit(1e8), 9)
}

/// 61-point grid on `[1e-2, 50]` for the complete-monotonicity check.
pub fn default_cm_grid<T: Real>() -> Vec<T> {
    geometric_grid(T::lit(1e-2), T::lit(50.0), 61)
}

pub fn default_sv_lambdas<T: Real>() -> Vec<T> {
    vec![T::lit(1.5), T::lit(2.0), T::lit(4.0)]
}

/// Shift set `x` for the gamma-class and self-neglect checks.
pub fn default_shifts<T: Real>() -> Vec<T> {
    vec![T::lit(-0.5), T::lit(0.5), T::lit(1.0), T::lit(2.0)]
}

/// Increasing grid `1, 10, 100, ...` (at least to `1e8`) continued until the
/// auxiliary scale is small against `t`: `scale(t) / t < 1e-8`, capped at `1e200`.
///
/// Second-order terms in the gamma-class and self-neglect limits are of size
/// `scale(t) / t`, so slowly shrinking scales need longer grids.
pub fn auxiliary_grid<T: Real>(scale: &dyn Fn(T) -> T) -> Vec<T> {
    let mut grid = default_t_grid::<T>();
    let ten = T::lit(10.0);
    let mut t = *grid.last().unwrap();
    while scale(t) / t >= T::lit(1e-8) && t < T::lit(1e200) {
        t *= ten;
        grid.push(t);
    }
    grid
}
