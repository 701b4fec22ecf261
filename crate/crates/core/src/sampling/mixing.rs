//! Laws of the mixing variable `V` whose Laplace transform is the generator.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, Poisson};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::generators::{FamilyKind, Generator};
use crate::scalar::Real;

/// Distribution of `V` with `E exp(-t V) = phi(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum MixingLaw {
    /// Gamma with unit rate.
    Gamma { shape: f64 },
    /// Positive stable with `E exp(-t V) = exp(-t^index)`, `0 < index <= 1`.
    PositiveStable { index: f64 },
    /// Logarithmic series with `P(V = k) ∝ p^k / k`, `p = 1 - exp(-theta)`.
    LogSeries { theta: f64 },
    /// Sibuya with `P(V > n) = Γ(n + 1 - index) / (Γ(n + 1) Γ(1 - index))`.
    Sibuya { index: f64 },
    /// `shift + M` with `M` negative binomial of the given size and failure probability.
    ShiftedNegBinomial { shift: f64, size: f64, prob: f64 },
}

impl MixingLaw {
    /// The law matching a catalog generator.
    pub fn for_generator<T: Real>(g: &Generator<T>) -> Result<Self> {
        let theta = g.theta().map(Real::as_f64);
        Ok(match g.kind() {
            FamilyKind::Clayton => MixingLaw::Gamma {
                shape: theta.unwrap().recip(),
            },
            FamilyKind::Gumbel => MixingLaw::PositiveStable {
                index: theta.unwrap().recip(),
            },
            FamilyKind::Frank => MixingLaw::LogSeries {
                theta: theta.unwrap(),
            },
            FamilyKind::JoeB5 => MixingLaw::Sibuya {
                index: theta.unwrap().recip(),
            },
            FamilyKind::NegBinomial => {
                let alpha = g.alpha().unwrap().as_f64();
                MixingLaw::ShiftedNegBinomial {
                    shift: alpha,
                    size: alpha,
                    prob: theta.unwrap(),
                }
            }
            FamilyKind::LogSv | FamilyKind::Custom => {
                return Err(Error::UnsupportedSampling(g.name().to_string()))
            }
        })
    }

    /// One draw of `V`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            MixingLaw::Gamma { shape } => {
                Gamma::new(shape, 1.0).expect("validated shape").sample(rng)
            }
            MixingLaw::PositiveStable { index } => positive_stable(index, rng),
            MixingLaw::LogSeries { theta } => log_series(theta, rng),
            MixingLaw::Sibuya { index } => sibuya(index, rng),
            MixingLaw::ShiftedNegBinomial { shift, size, prob } => {
                shift + neg_binomial(size, prob, rng)
            }
        }
    }

    /// `E V`, infinite for the heavy-tailed laws.
    pub fn mean(&self) -> f64 {
        match *self {
            MixingLaw::Gamma { shape } => shape,
            MixingLaw::PositiveStable { index } if index == 1.0 => 1.0,
            MixingLaw::PositiveStable { .. } => f64::INFINITY,
            MixingLaw::LogSeries { theta } => {
                let p = -(-theta).exp_m1();
                p / ((1.0 - p) * theta)
            }
            MixingLaw::Sibuya { index } if index == 1.0 => 1.0,
            MixingLaw::Sibuya { .. } => f64::INFINITY,
            MixingLaw::ShiftedNegBinomial { shift, size, prob } => {
                shift + size * prob / (1.0 - prob)
            }
        }
    }
}

/// Uniform on `(0, 1]`, safe to take the log of.
fn open_uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

// Kanter's representation of the one-sided stable law.
fn positive_stable<R: Rng + ?Sized>(a: f64, rng: &mut R) -> f64 {
    if a == 1.0 {
        return 1.0;
    }
    let u = std::f64::consts::PI * open_uniform(rng);
    let e: f64 = rng.sample(Exp1);
    let ln_sin_au = (a * u).sin().ln();
    let ln_v = (ln_sin_au - u.sin().ln()) / a
        + (1.0 - a) / a * (((1.0 - a) * u).sin().ln() - ln_sin_au - e.ln());
    ln_v.exp()
}

// Kemp's LK algorithm; `ln(1 - p) = -theta` is used directly so that
// `p` close to one stays exact.
fn log_series<R: Rng + ?Sized>(theta: f64, rng: &mut R) -> f64 {
    let p = -(-theta).exp_m1();
    let v = open_uniform(rng);
    if v >= p {
        return 1.0;
    }
    let u = open_uniform(rng);
    let q = -(-theta * u).exp_m1();
    if v <= q * q {
        let k = 1.0 + (v.ln() / q.ln()).floor();
        return k.max(1.0);
    }
    if v <= q {
        2.0
    } else {
        1.0
    }
}

/// `ln Γ(x - a) - ln Γ(x)` for `x > a`, accurate for large `x`.
fn ln_gamma_ratio(x: f64, a: f64) -> f64 {
    if x < 30.0 {
        return ln_gamma(x - a) - ln_gamma(x);
    }
    let y = x - a;
    let stirling_tail = |z: f64| {
        let z2 = z * z;
        (1.0 / 12.0 - (1.0 / 360.0 - 1.0 / (1260.0 * z2)) / z2) / z
    };
    -a * x.ln() + (y - 0.5) * (-a / x).ln_1p() + a + stirling_tail(y) - stirling_tail(x)
}

// Inversion of the survival function, searched on the integers.
fn sibuya<R: Rng + ?Sized>(a: f64, rng: &mut R) -> f64 {
    if a >= 1.0 {
        return 1.0;
    }
    let s = open_uniform(rng);
    if s >= 1.0 - a {
        return 1.0;
    }
    let lg = ln_gamma(1.0 - a);
    let ln_survival = |n: f64| ln_gamma_ratio(n + 1.0, a) - lg;
    let target = s.ln();
    let guess = (-(target + lg) / a).exp();
    if guess > 2f64.powi(52) {
        return guess.round();
    }
    let mut lo = 1.0;
    let mut hi = guess.ceil().max(2.0);
    while ln_survival(hi) > target {
        lo = hi;
        hi *= 2.0;
    }
    // invariant: S(lo) > s >= S(hi)
    while hi - lo > 1.0 {
        let mid = ((lo + hi) / 2.0).floor();
        if ln_survival(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

// Gamma-Poisson mixture: `P(M = m) ∝ Γ(size + m) / m! * prob^m`.
fn neg_binomial<R: Rng + ?Sized>(size: f64, prob: f64, rng: &mut R) -> f64 {
    if prob == 0.0 {
        return 0.0;
    }
    let lambda: f64 = Gamma::new(size, prob / (1.0 - prob))
        .expect("validated parameters")
        .sample(rng);
    if !(lambda > 0.0) {
        return 0.0;
    }
    if lambda > 1e15 {
        return lambda.round();
    }
    Poisson::new(lambda).expect("finite rate").sample(rng)
}
