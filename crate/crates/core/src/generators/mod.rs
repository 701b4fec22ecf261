//! Catalog of Laplace-transform generators.
//!
//! A generator `phi` is the Laplace transform of a positive mixing variable:
//! `phi(0) = 1`, strictly decreasing, `phi(t) -> 0`. Each catalog family
//! carries hand-written log-domain forms of `phi` and `phi^{-1}` so that the
//! deep lower tail (`u` down to `1e-300`) stays representable, plus
//! `1 - phi` / `phi^{-1}(1 - s)` forms for the upper corner.
//!
//! | family        | `phi(t)`                                  | parameters          |
//! |---------------|-------------------------------------------|---------------------|
//! | `Clayton`     | `(1 + t)^{-1/theta}`                      | `theta > 0`         |
//! | `Gumbel`      | `exp(-t^{1/theta})`                       | `theta >= 1`        |
//! | `Frank`       | `-ln(1 - (1 - e^{-theta}) e^{-t}) / theta` | `theta > 0`         |
//! | `JoeB5`       | `1 - (1 - e^{-t})^{1/theta}`              | `theta >= 1`        |
//! | `NegBinomial` | `[(1-theta) e^{-t} / (1 - theta e^{-t})]^alpha` | `0 <= theta < 1`, `alpha > 0` |
//! | `LogSv`       | `1 / ln(t + e)`                           | none                |

mod custom;
pub mod derivatives;
mod regime;
mod spec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{ln_expm1, log_add_exp, softplus, Real};
use derivatives::{
    divided_difference, exp_composition_factor, faa_di_bruno, falling_factorial, polylog_neg,
    MAX_ANALYTIC_ORDER, MAX_NUMERIC_ORDER,
};

pub use custom::CustomGenerator;
pub use regime::{PowerScale, Regime};

/// Family tag without parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    Clayton,
    Gumbel,
    Frank,
    JoeB5,
    NegBinomial,
    LogSv,
    Custom,
}

impl FamilyKind {
    pub const CATALOG: [FamilyKind; 6] = [
        FamilyKind::Clayton,
        FamilyKind::Gumbel,
        FamilyKind::Frank,
        FamilyKind::JoeB5,
        FamilyKind::NegBinomial,
        FamilyKind::LogSv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Clayton => "clayton",
            FamilyKind::Gumbel => "gumbel",
            FamilyKind::Frank => "frank",
            FamilyKind::JoeB5 => "joeb5",
            FamilyKind::NegBinomial => "negbin",
            FamilyKind::LogSv => "logsv",
            FamilyKind::Custom => "custom",
        }
    }
}

#[derive(Clone, Debug)]
enum Kind<T> {
    Clayton {
        theta: T,
    },
    Gumbel {
        theta: T,
    },
    /// `log_p = ln(1 - e^{-theta})`.
    Frank {
        theta: T,
        log_p: T,
    },
    JoeB5 {
        theta: T,
    },
    NegBinomial {
        theta: T,
        alpha: T,
    },
    LogSv,
    Custom(CustomGenerator<T>),
}

/// A validated Laplace-transform generator.
#[derive(Clone, Debug)]
pub struct Generator<T> {
    kind: Kind<T>,
}

fn invalid(family: &'static str, name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter {
        family,
        name,
        value,
        reason,
    }
}

fn sign<T: Real>(n: usize) -> T {
    if n.is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    }
}

impl<T: Real> Generator<T> {
    pub fn clayton(theta: T) -> Result<Self> {
        if !(theta > T::zero()) || !theta.is_finite() {
            return Err(invalid("clayton", "theta", theta.as_f64(), "must be > 0"));
        }
        Ok(Generator {
            kind: Kind::Clayton { theta },
        })
    }

    /// `theta = 1` is the independence copula.
    pub fn gumbel(theta: T) -> Result<Self> {
        if !(theta >= T::one()) || !theta.is_finite() {
            return Err(invalid("gumbel", "theta", theta.as_f64(), "must be >= 1"));
        }
        Ok(Generator {
            kind: Kind::Gumbel { theta },
        })
    }

    pub fn frank(theta: T) -> Result<Self> {
        if !(theta > T::zero()) || !theta.is_finite() {
            return Err(invalid("frank", "theta", theta.as_f64(), "must be > 0"));
        }
        let log_p = (-(-theta).exp_m1()).ln();
        Ok(Generator {
            kind: Kind::Frank { theta, log_p },
        })
    }

    pub fn joe_b5(theta: T) -> Result<Self> {
        if !(theta >= T::one()) || !theta.is_finite() {
            return Err(invalid("joeb5", "theta", theta.as_f64(), "must be >= 1"));
        }
        Ok(Generator {
            kind: Kind::JoeB5 { theta },
        })
    }

    pub fn neg_binomial(theta: T, alpha: T) -> Result<Self> {
        if !(theta >= T::zero() && theta < T::one()) {
            return Err(invalid(
                "negbin",
                "theta",
                theta.as_f64(),
                "must be in [0, 1)",
            ));
        }
        if !(alpha > T::zero()) || !alpha.is_finite() {
            return Err(invalid("negbin", "alpha", alpha.as_f64(), "must be > 0"));
        }
        Ok(Generator {
            kind: Kind::NegBinomial { theta, alpha },
        })
    }

    pub fn log_sv() -> Self {
        Generator { kind: Kind::LogSv }
    }

    pub fn custom(custom: CustomGenerator<T>) -> Self {
        Generator {
            kind: Kind::Custom(custom),
        }
    }

    pub fn kind(&self) -> FamilyKind {
        match self.kind {
            Kind::Clayton { .. } => FamilyKind::Clayton,
            Kind::Gumbel { .. } => FamilyKind::Gumbel,
            Kind::Frank { .. } => FamilyKind::Frank,
            Kind::JoeB5 { .. } => FamilyKind::JoeB5,
            Kind::NegBinomial { .. } => FamilyKind::NegBinomial,
            Kind::LogSv => FamilyKind::LogSv,
            Kind::Custom(_) => FamilyKind::Custom,
        }
    }

    pub fn is_catalog(&self) -> bool {
        !matches!(self.kind, Kind::Custom(_))
    }

    pub fn theta(&self) -> Option<T> {
        match self.kind {
            Kind::Clayton { theta }
            | Kind::Gumbel { theta }
            | Kind::Frank { theta, .. }
            | Kind::JoeB5 { theta }
            | Kind::NegBinomial { theta, .. } => Some(theta),
            Kind::LogSv | Kind::Custom(_) => None,
        }
    }

    /// The negative-binomial shape parameter.
    pub fn alpha(&self) -> Option<T> {
        match self.kind {
            Kind::NegBinomial { alpha, .. } => Some(alpha),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        match &self.kind {
            Kind::Custom(c) => c.name(),
            _ => self.kind().name(),
        }
    }

    // ---------------------------------------------------------------------
    // Checked public surface
    // ---------------------------------------------------------------------

    /// `phi(t)` for `t >= 0`.
    pub fn psi(&self, t: T) -> Result<T> {
        check_t(t)?;
        Ok(self.psi_raw(t))
    }

    /// `ln phi(t)`, accurate where `phi(t)` underflows.
    pub fn log_psi(&self, t: T) -> Result<T> {
        check_t(t)?;
        Ok(self.log_psi_raw(t))
    }

    /// `ln phi(exp(log_t))`, for arguments too large to store as `t`.
    pub fn log_psi_at_log(&self, log_t: T) -> Result<T> {
        if log_t.is_nan() {
            return Err(Error::domain("log t is NaN"));
        }
        Ok(self.log_psi_at_log_raw(log_t))
    }

    /// `1 - phi(t)` without cancellation near `t = 0`.
    pub fn one_minus_psi(&self, t: T) -> Result<T> {
        check_t(t)?;
        Ok(self.one_minus_psi_raw(t))
    }

    /// `phi^{-1}(u)` for `0 < u <= 1`.
    pub fn psi_inv(&self, u: T) -> Result<T> {
        check_u(u)?;
        self.psi_inv_raw(u)
    }

    /// `phi^{-1}(exp(log_u))` for `log_u <= 0`.
    pub fn psi_inv_from_log(&self, log_u: T) -> Result<T> {
        check_log_u(log_u)?;
        self.inv_from_log_raw(log_u)
    }

    /// `ln phi^{-1}(exp(log_u))`; finite even when `phi^{-1}(u)` overflows.
    pub fn log_psi_inv_from_log(&self, log_u: T) -> Result<T> {
        check_log_u(log_u)?;
        self.log_inv_from_log_raw(log_u)
    }

    /// `phi^{-1}(1 - s)` for `0 <= s < 1`, accurate for small `s`.
    pub fn psi_inv_one_minus(&self, s: T) -> Result<T> {
        if s.is_nan() || s < T::zero() || s > T::one() {
            return Err(Error::domain(format!("1 - u must lie in [0,1], got {s}")));
        }
        if s == T::one() {
            return Err(Error::InfiniteInverse);
        }
        self.psi_inv_one_minus_raw(s)
    }

    /// `d^n phi / dt^n` at `t > 0` (`t >= 0` for `n = 0`).
    pub fn psi_deriv(&self, t: T, order: usize) -> Result<T> {
        check_t(t)?;
        if order == 0 {
            return Ok(self.psi_raw(t));
        }
        if !(t > T::zero()) {
            return Err(Error::domain("derivatives require t > 0"));
        }
        self.deriv_raw(t, order)
    }

    /// Highest derivative order `psi_deriv` can serve.
    pub fn max_derivative_order(&self) -> usize {
        match &self.kind {
            Kind::Custom(c) => match c.derivative {
                Some((_, m)) => m.max(MAX_NUMERIC_ORDER),
                None => MAX_NUMERIC_ORDER,
            },
            _ => MAX_ANALYTIC_ORDER,
        }
    }

    /// Hazard scale `g(t) = -phi(t) / phi'(t)`, the reciprocal failure rate.
    pub fn hazard_scale(&self, t: T) -> Result<T> {
        check_t(t)?;
        if !(t > T::zero()) {
            return Err(Error::domain("hazard scale requires t > 0"));
        }
        let g = self.hazard_raw(t)?;
        if !(g > T::zero()) || !g.is_finite() {
            return Err(Error::DegenerateHazard { t: t.as_f64() });
        }
        Ok(g)
    }

    /// Analytically known tail class; `None` for custom generators without one.
    pub fn declared_regime(&self) -> Option<Regime<T>> {
        let one = T::one();
        match &self.kind {
            Kind::Clayton { theta } => Some(Regime::RegularlyVarying {
                index: theta.recip(),
            }),
            Kind::LogSv => Some(Regime::SlowlyVarying),
            Kind::Frank { .. } | Kind::JoeB5 { .. } => Some(Regime::RapidlyVarying {
                gamma_index: one,
                scale: PowerScale::constant(one),
            }),
            Kind::NegBinomial { alpha, .. } => Some(Regime::RapidlyVarying {
                gamma_index: *alpha,
                scale: PowerScale::constant(one),
            }),
            Kind::Gumbel { theta } => Some(Regime::RapidlyVarying {
                gamma_index: theta.recip(),
                scale: PowerScale::power(one, one - theta.recip()),
            }),
            Kind::Custom(c) => c.regime,
        }
    }

    // ---------------------------------------------------------------------
    // Unchecked kernels
    // ---------------------------------------------------------------------

    pub(crate) fn psi_raw(&self, t: T) -> T {
        if t == T::zero() {
            return T::one();
        }
        match &self.kind {
            Kind::Frank { theta, log_p } => -(-(*log_p - t).exp()).ln_1p() / *theta,
            Kind::JoeB5 { theta } => -((-(-t).exp()).ln_1p() / *theta).exp_m1(),
            Kind::LogSv => (T::one() + (t / T::E()).ln_1p()).recip(),
            Kind::Custom(c) => (c.psi)(t),
            _ => self.log_psi_raw(t).exp(),
        }
    }

    pub(crate) fn log_psi_raw(&self, t: T) -> T {
        if t == T::zero() {
            return T::zero();
        }
        match &self.kind {
            Kind::Clayton { theta } => -t.ln_1p() / *theta,
            Kind::Gumbel { theta } => -t.powf(theta.recip()),
            Kind::Frank { theta, log_p } => {
                let lx = *log_p - t;
                let x = lx.exp();
                if x < T::epsilon() {
                    lx - theta.ln()
                } else {
                    (-(-x).ln_1p()).ln() - theta.ln()
                }
            }
            Kind::JoeB5 { theta } => {
                let x = (-t).exp();
                if x < T::epsilon() {
                    -theta.ln() - t
                } else if t < T::one() {
                    // 1 - phi is not close to 1 here
                    (-((-(-t).exp_m1()).ln() / *theta).exp()).ln_1p()
                } else {
                    (-((-x).ln_1p() / *theta).exp_m1()).ln()
                }
            }
            Kind::NegBinomial { theta, alpha } => {
                let ratio = -*theta * (-t).exp_m1() / (T::one() - *theta);
                -*alpha * (t + ratio.ln_1p())
            }
            Kind::LogSv => -(T::one() + (t / T::E()).ln_1p()).ln(),
            Kind::Custom(c) => (c.psi)(t).ln(),
        }
    }

    pub(crate) fn log_psi_at_log_raw(&self, log_t: T) -> T {
        match &self.kind {
            Kind::Clayton { theta } => -softplus(log_t) / *theta,
            Kind::Gumbel { theta } => -(log_t / *theta).exp(),
            Kind::LogSv => -log_add_exp(log_t, T::one()).ln(),
            _ => self.log_psi_raw(log_t.exp()),
        }
    }

    pub(crate) fn one_minus_psi_raw(&self, t: T) -> T {
        match &self.kind {
            Kind::Clayton { theta } => -(-t.ln_1p() / *theta).exp_m1(),
            Kind::Gumbel { theta } => -(-t.powf(theta.recip())).exp_m1(),
            Kind::Frank { theta, .. } => (theta.exp_m1() * -(-t).exp_m1()).ln_1p() / *theta,
            Kind::JoeB5 { theta } => ((-(-t).exp_m1()).ln() / *theta).exp(),
            Kind::NegBinomial { .. } => -self.log_psi_raw(t).exp_m1(),
            Kind::LogSv => {
                let l = (t / T::E()).ln_1p();
                l / (T::one() + l)
            }
            Kind::Custom(c) => T::one() - (c.psi)(t),
        }
    }

    pub(crate) fn psi_inv_raw(&self, u: T) -> Result<T> {
        if u == T::one() {
            return Ok(T::zero());
        }
        if u <= T::zero() {
            return Err(Error::InfiniteInverse);
        }
        match &self.kind {
            Kind::Custom(c) => match &c.inverse {
                Some(inv) => Ok(inv(u)),
                None => self.solve_log_psi(u.ln()),
            },
            _ if u > T::lit(0.5) => self.psi_inv_one_minus_raw(T::one() - u),
            _ => self.inv_from_log_raw(u.ln()),
        }
    }

    pub(crate) fn inv_from_log_raw(&self, lu: T) -> Result<T> {
        if lu == T::zero() {
            return Ok(T::zero());
        }
        if lu == T::neg_infinity() {
            return Err(Error::InfiniteInverse);
        }
        if matches!(self.kind, Kind::Frank { .. } | Kind::JoeB5 { .. }) && lu > -T::LN_2() {
            return self.psi_inv_one_minus_raw(-lu.exp_m1());
        }
        Ok(match &self.kind {
            Kind::Clayton { theta } => (-*theta * lu).exp_m1(),
            Kind::Gumbel { theta } => (-lu).powf(*theta),
            Kind::Frank { theta, log_p } => {
                let v = *theta * lu.exp();
                let log_q = if v < T::epsilon() {
                    theta.ln() + lu
                } else {
                    (-(-v).exp_m1()).ln()
                };
                *log_p - log_q
            }
            Kind::JoeB5 { theta } => {
                let u = lu.exp();
                if u < T::epsilon() {
                    -(theta.ln() + lu)
                } else {
                    -(-(*theta * (-u).ln_1p()).exp_m1()).ln()
                }
            }
            Kind::NegBinomial { theta, alpha } => {
                let s = lu / *alpha;
                -s + (*theta * s.exp_m1()).ln_1p()
            }
            Kind::LogSv => T::E() * (-lu).exp_m1().exp_m1(),
            Kind::Custom(c) => {
                let u = lu.exp();
                match &c.inverse {
                    Some(inv) if u > T::zero() => inv(u),
                    _ => self.solve_log_psi(lu)?,
                }
            }
        })
    }

    pub(crate) fn log_inv_from_log_raw(&self, lu: T) -> Result<T> {
        if lu == T::zero() {
            return Ok(T::neg_infinity());
        }
        match &self.kind {
            Kind::Clayton { theta } => Ok(ln_expm1(-*theta * lu)),
            Kind::Gumbel { theta } => Ok(*theta * (-lu).ln()),
            Kind::LogSv => Ok(T::one() + ln_expm1((-lu).exp_m1())),
            _ => Ok(self.inv_from_log_raw(lu)?.ln()),
        }
    }

    pub(crate) fn psi_inv_one_minus_raw(&self, s: T) -> Result<T> {
        if s == T::zero() {
            return Ok(T::zero());
        }
        if s >= T::one() {
            return Err(Error::InfiniteInverse);
        }
        let one = T::one();
        Ok(match &self.kind {
            Kind::Clayton { theta } => (-*theta * (-s).ln_1p()).exp_m1(),
            Kind::Gumbel { theta } => (-(-s).ln_1p()).powf(*theta),
            Kind::Frank { theta, .. } => {
                -((-*theta).exp() * (*theta * s).exp_m1() / (-*theta).exp_m1()).ln_1p()
            }
            Kind::JoeB5 { theta } => -(-s.powf(*theta)).ln_1p(),
            Kind::NegBinomial { .. } => self.inv_from_log_raw((-s).ln_1p())?,
            Kind::LogSv => T::E() * (s / (one - s)).exp_m1(),
            Kind::Custom(_) => self.psi_inv_raw(one - s)?,
        })
    }

    fn deriv_raw(&self, t: T, n: usize) -> Result<T> {
        if let Kind::Custom(c) = &self.kind {
            if let Some((d, max)) = &c.derivative {
                if n <= *max {
                    return Ok(d(t, n));
                }
            }
            if n <= MAX_NUMERIC_ORDER {
                let f = |x: T| (c.psi)(x);
                return Ok(divided_difference(&f, t, n));
            }
            return Err(Error::Capability(format!(
                "derivative of order {n} exceeds the divided-difference limit {MAX_NUMERIC_ORDER} for {}",
                c.name()
            )));
        }
        if n > MAX_ANALYTIC_ORDER {
            return Err(Error::Capability(format!(
                "derivative of order {n} exceeds the analytic limit {MAX_ANALYTIC_ORDER}"
            )));
        }
        let one = T::one();
        Ok(match &self.kind {
            Kind::Clayton { theta } => {
                let a = theta.recip();
                let coef = (0..n).fold(one, |acc, j| acc * (a + T::from_count(j)));
                sign::<T>(n) * coef * (-(a + T::from_count(n)) * t.ln_1p()).exp()
            }
            Kind::Gumbel { theta } => {
                let a = theta.recip();
                let dl: Vec<T> = (1..=n)
                    .map(|m| -falling_factorial(a, m) * t.powf(a - T::from_count(m)))
                    .collect();
                self.psi_raw(t) * exp_composition_factor(&dl, n)
            }
            Kind::Frank { theta, log_p } => {
                let lx = *log_p - t;
                let x = lx.exp();
                let omx = -lx.exp_m1();
                sign::<T>(n) * polylog_neg(n - 1, x, omx) / *theta
            }
            Kind::JoeB5 { theta } => {
                let a = theta.recip();
                // phi^{(n)} = y^a * sum_m c[m] r^m with y = 1 - e^{-t}, r = e^{-t}/y.
                let mut c = vec![T::zero(); n + 1];
                c[1] = -a;
                for k in 1..n {
                    let mut next = vec![T::zero(); n + 1];
                    for m in 1..=(k + 1) {
                        let stay = if m <= k {
                            -T::from_count(m) * c[m]
                        } else {
                            T::zero()
                        };
                        let up = (a - T::from_count(m - 1)) * c[m - 1];
                        next[m] = stay + up;
                    }
                    c = next;
                }
                let r = t.exp_m1().recip();
                let poly = (1..=n).rev().fold(T::zero(), |acc, m| (acc + c[m]) * r);
                let ya = (a * (-(-t).exp_m1()).ln()).exp();
                ya * poly
            }
            Kind::NegBinomial { theta, alpha } => {
                let (q, omq) = if *theta == T::zero() {
                    (T::zero(), one)
                } else {
                    let lq = theta.ln() - t;
                    (lq.exp(), -lq.exp_m1())
                };
                let dl: Vec<T> = (1..=n)
                    .map(|m| {
                        if m == 1 {
                            -*alpha / omq
                        } else {
                            *alpha * sign::<T>(m) * polylog_neg(m - 1, q, omq)
                        }
                    })
                    .collect();
                self.psi_raw(t) * exp_composition_factor(&dl, n)
            }
            Kind::LogSv => {
                let ell = one + (t / T::E()).ln_1p();
                let s = t + T::E();
                let mut fact = one;
                let mut df = Vec::with_capacity(n);
                let mut dh = Vec::with_capacity(n);
                for k in 1..=n {
                    // dh uses (k-1)!, df uses k!.
                    dh.push(sign::<T>(k - 1) * fact / s.powi(k as i32));
                    fact *= T::from_count(k);
                    df.push(sign::<T>(k) * fact / ell.powi(k as i32 + 1));
                }
                faa_di_bruno(&df, &dh, n)
            }
            Kind::Custom(_) => unreachable!(),
        })
    }

    fn hazard_raw(&self, t: T) -> Result<T> {
        let one = T::one();
        Ok(match &self.kind {
            Kind::Clayton { theta } => *theta * (one + t),
            Kind::Gumbel { theta } => *theta * t.powf(one - theta.recip()),
            Kind::Frank { log_p, .. } => {
                let lx = *log_p - t;
                let x = lx.exp();
                if x < T::epsilon() {
                    one
                } else {
                    -lx.exp_m1() * (-(-x).ln_1p() / x)
                }
            }
            Kind::JoeB5 { theta } => {
                let a = theta.recip();
                let x = (-t).exp();
                if x < T::epsilon() {
                    one
                } else {
                    let ln_y = (-x).ln_1p();
                    let ratio = -(a * ln_y).exp_m1() / (a * x);
                    ratio * ((one - a) * ln_y).exp()
                }
            }
            Kind::NegBinomial { theta, alpha } => (one - *theta * (-t).exp()) / *alpha,
            Kind::LogSv => (t + T::E()) * (one + (t / T::E()).ln_1p()),
            Kind::Custom(_) => {
                let d1 = self.deriv_raw(t, 1)?;
                if d1 == T::zero() || !d1.is_finite() {
                    return Err(Error::DegenerateHazard { t: t.as_f64() });
                }
                -self.psi_raw(t) / d1
            }
        })
    }

    /// Solves `ln phi(t) = lu` by bracketing on `[0, t_hi]` (doubling `t_hi`)
    /// and alternating secant and bisection steps.
    fn solve_log_psi(&self, lu: T) -> Result<T> {
        let f = |t: T| self.log_psi_raw(t) - lu;
        if f(T::zero()) <= T::zero() {
            return Ok(T::zero());
        }
        let tol = T::lit(1e-12).max(T::lit(8.0) * T::epsilon() * lu.abs());
        let (mut lo, mut hi) = (T::zero(), T::one());
        let mut fhi = f(hi);
        let mut doublings = 0;
        while fhi > T::zero() {
            lo = hi;
            hi = hi + hi;
            fhi = f(hi);
            doublings += 1;
            if doublings > 4000 || !hi.is_finite() {
                return Err(Error::RootFinding(format!(
                    "no bracket for ln u = {lu} in {}",
                    self.name()
                )));
            }
        }
        let mut flo = f(lo);
        let half = T::lit(0.5);
        for iter in 0..400 {
            let secant = hi - fhi * (hi - lo) / (fhi - flo);
            let x = if iter % 3 != 2 && secant > lo && secant < hi {
                secant
            } else {
                (lo + hi) * half
            };
            let fx = f(x);
            if fx.abs() <= tol || (hi - lo) <= T::epsilon() * hi {
                return Ok(x);
            }
            if fx > T::zero() {
                lo = x;
                flo = fx;
            } else {
                hi = x;
                fhi = fx;
            }
        }
        Err(Error::RootFinding(format!(
            "no convergence for ln u = {lu} in {}",
            self.name()
        )))
    }
}

fn check_t<T: Real>(t: T) -> Result<()> {
    if t.is_nan() || t < T::zero() {
        return Err(Error::domain(format!(
            "t must be a nonnegative number, got {t}"
        )));
    }
    Ok(())
}

fn check_u<T: Real>(u: T) -> Result<()> {
    if u.is_nan() || u < T::zero() || u > T::one() {
        return Err(Error::domain(format!("u must lie in (0, 1], got {u}")));
    }
    if u == T::zero() {
        return Err(Error::InfiniteInverse);
    }
    Ok(())
}

fn check_log_u<T: Real>(lu: T) -> Result<()> {
    if lu.is_nan() || lu > T::zero() {
        return Err(Error::domain(format!("log u must be <= 0, got {lu}")));
    }
    if lu == T::neg_infinity() {
        return Err(Error::InfiniteInverse);
    }
    Ok(())
}

#[cfg(test)]
mod tests;
