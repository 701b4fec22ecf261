//! Closed-form tail dependence functions and per-family tail profiles.
//!
//! * regular variation with index `alpha`: `b(w; 1) = (sum w_j^{-1/alpha})^{-alpha}`
//! * slow variation: `b(w; 1) = min(w)`
//! * gamma-class rapid variation: `b(w; k) = tau * prod w_i^{k/d}`
//! * upper exponent with index `beta`: `a(w; 1) = (sum w_j^beta)^{1/beta}`

use serde::{Deserialize, Serialize};

use crate::copula::MAX_DIM;
use crate::error::{Error, Result};
use crate::generators::{Generator, Regime};
use crate::scalar::{geometric_grid, Real};
use crate::tail_numeric::{estimate_tau, TauOutcome};

fn check_weights<T: Real>(w: &[T]) -> Result<()> {
    if w.is_empty() {
        return Err(Error::domain("weight vector is empty"));
    }
    if let Some(bad) = w.iter().find(|x| !(**x >= T::zero()) || !x.is_finite()) {
        return Err(Error::domain(format!(
            "weights must be finite and >= 0, got {bad}"
        )));
    }
    Ok(())
}

fn positive<T: Real>(name: &str, x: T) -> Result<()> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::domain(format!("{name} must be positive, got {x}")));
    }
    Ok(())
}

/// `(sum_j w_j^{-1/alpha})^{-alpha}`; zero if any weight is zero.
pub fn lower_tail_rv<T: Real>(alpha: T, w: &[T]) -> Result<T> {
    positive("alpha", alpha)?;
    check_weights(w)?;
    let m = w.iter().copied().fold(T::infinity(), T::min);
    if m == T::zero() {
        return Ok(T::zero());
    }
    // factor out the minimum so every term lies in (0, 1]
    let e = -alpha.recip();
    let s: T = w.iter().map(|x| (*x / m).powf(e)).sum();
    Ok(m * (-alpha * s.ln()).exp())
}

/// `(sum_j w_j^beta)^{1/beta}`.
pub fn upper_exponent_rv<T: Real>(beta: T, w: &[T]) -> Result<T> {
    positive("beta", beta)?;
    check_weights(w)?;
    let m = w.iter().copied().fold(T::zero(), T::max);
    if m == T::zero() {
        return Ok(T::zero());
    }
    let s: T = w.iter().map(|x| (*x / m).powf(beta)).sum();
    Ok(m * (s.ln() / beta).exp())
}

/// `min(w)`.
pub fn lower_tail_sv<T: Real>(w: &[T]) -> Result<T> {
    check_weights(w)?;
    Ok(w.iter().copied().fold(T::infinity(), T::min))
}

/// `tau * prod_i w_i^{k/d}` with `d = w.len()`.
pub fn lower_tail_rapid<T: Real>(k: T, tau: T, w: &[T], d: usize) -> Result<T> {
    check_weights(w)?;
    if w.len() != d {
        return Err(Error::domain(format!(
            "expected {d} weights, got {}",
            w.len()
        )));
    }
    if !(k >= T::one() && k <= T::from_count(d)) {
        return Err(Error::domain(format!(
            "tail order must lie in [1, {d}], got {k}"
        )));
    }
    positive("tau", tau)?;
    if w.iter().any(|x| *x == T::zero()) {
        return Ok(T::zero());
    }
    let log_sum: T = w.iter().map(|x| x.ln()).sum();
    Ok(tau * (k / T::from_count(d) * log_sum).exp())
}

/// Constant attached to the tail order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum TailConstant<T> {
    /// Rapid variation: `tau = lim phi(dt) / phi(t)^k`.
    Tau(T),
    /// Regular variation index `alpha`.
    VariationIndex(T),
    /// Slow variation carries no constant.
    Absent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailProfile<T> {
    pub tail_order: T,
    pub constant: TailConstant<T>,
    /// The slowly varying factor `l(u)` is taken to be the constant 1.
    pub constant_slow_factor: bool,
    pub regime: Regime<T>,
    pub dimension: usize,
    /// Set when the constant was obtained numerically rather than from a closed form.
    pub derived: bool,
    /// Index `beta` of `phi^{-1}(1 - s)` at `s -> 0`, driving the upper exponent.
    pub upper_index: T,
}

impl<T: Real> TailProfile<T> {
    pub fn tau(&self) -> Option<T> {
        match self.constant {
            TailConstant::Tau(t) => Some(t),
            _ => None,
        }
    }

    /// `b(w; k)` implied by the profile.
    pub fn lower_tail(&self, w: &[T]) -> Result<T> {
        match self.constant {
            TailConstant::VariationIndex(a) => lower_tail_rv(a, w),
            TailConstant::Absent => lower_tail_sv(w),
            TailConstant::Tau(tau) => lower_tail_rapid(self.tail_order, tau, w, self.dimension),
        }
    }

    /// `a(w; 1)` from the upper index.
    pub fn upper_exponent(&self, w: &[T]) -> Result<T> {
        upper_exponent_rv(self.upper_index, w)
    }
}

/// Closed-form profile of a catalog family in dimension `d`.
///
/// Frank, Joe B5 and negative-binomial constants are closed-form for `d = 2`;
/// for `d > 2` the tail order is `d` and `tau` is computed as the ratio limit
/// on `t` in `[1, 100]`, with `derived` set.
pub fn theoretical_profile<T: Real>(g: &Generator<T>, d: usize) -> Result<TailProfile<T>> {
    if !(2..=MAX_DIM).contains(&d) {
        return Err(Error::domain(format!(
            "dimension must be in 2..={MAX_DIM}, got {d}"
        )));
    }
    if !g.is_catalog() {
        return Err(Error::Capability(format!(
            "no closed-form tail profile for {}; use the numeric estimators",
            g.name()
        )));
    }
    let regime = g
        .declared_regime()
        .expect("catalog families declare a regime");
    let one = T::one();
    let dd = T::from_count(d);
    let theta = g.theta();
    let profile = |k: T, constant, derived, upper_index| TailProfile {
        tail_order: k,
        constant,
        constant_slow_factor: true,
        regime,
        dimension: d,
        derived,
        upper_index,
    };
    use crate::generators::FamilyKind as F;
    Ok(match g.kind() {
        F::Clayton => profile(
            one,
            TailConstant::VariationIndex(theta.unwrap().recip()),
            false,
            one,
        ),
        F::LogSv => profile(one, TailConstant::Absent, false, one),
        F::Gumbel => {
            let th = theta.unwrap();
            profile(dd.powf(th.recip()), TailConstant::Tau(one), false, th)
        }
        kind @ (F::Frank | F::JoeB5 | F::NegBinomial) => {
            let th = theta.unwrap();
            let upper = if kind == F::JoeB5 { th } else { one };
            if d == 2 {
                let tau = match kind {
                    F::Frank => th / -(-th).exp_m1(),
                    F::JoeB5 => th,
                    _ => (-g.alpha().unwrap() * (-th).ln_1p()).exp(),
                };
                profile(dd, TailConstant::Tau(tau), false, upper)
            } else {
                let grid = geometric_grid(one, T::lit(100.0), 9);
                match estimate_tau(g, dd, d, &grid, T::lit(1e-9))? {
                    TauOutcome::Finite(est) => {
                        profile(dd, TailConstant::Tau(est.value), true, upper)
                    }
                    TauOutcome::NoFiniteTau { .. } => {
                        return Err(Error::RootFinding(format!(
                            "ratio limit for {g} in dimension {d} did not settle"
                        )))
                    }
                }
            }
        }
        F::Custom => unreachable!(),
    })
}
