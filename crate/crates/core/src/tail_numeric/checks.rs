use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::estimators::{estimate_rv_index, Trend};
use super::limits::{Extrapolation, LimitEstimate, Method};
use super::{default_t_grid, LIMIT_TOLERANCE};
use crate::error::{Error, Result};
use crate::generators::{Generator, Regime};
use crate::scalar::Real;

/// Largest final ratio accepted by the slow-variation inverse check.
pub const SV_RATIO_BOUND: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvInverseSeries<T> {
    pub lambda: T,
    /// `(u, phi^{-1}(lambda u) / phi^{-1}(u))`.
    pub ratios: Vec<(T, T)>,
    /// Grid points with `lambda u >= 1`.
    pub skipped: Vec<T>,
    /// Non-increasing over the trailing half of the series.
    pub decreasing: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvInverseReport<T> {
    pub series: Vec<SvInverseSeries<T>>,
    pub pass: bool,
}

/// Checks `phi^{-1}(lambda u) / phi^{-1}(u) -> 0` as `u -> 0`, the rapid
/// variation of the inverse of a slowly varying generator.
///
/// Requires a slowly varying generator: declared, or detected numerically for
/// custom generators without a declared regime.
pub fn check_sv_inverse_rapid<T: Real>(
    g: &Generator<T>,
    lambdas: &[T],
    u_grid: &[T],
) -> Result<SvInverseReport<T>> {
    match g.declared_regime() {
        Some(Regime::SlowlyVarying) => {}
        Some(other) => {
            return Err(Error::Precondition(format!(
                "{g} is {}, not slowly varying",
                other.label()
            )))
        }
        None => {
            let rv = estimate_rv_index(g, &default_t_grid(), T::lit(LIMIT_TOLERANCE))?;
            if rv.trend != Trend::Vanishing {
                return Err(Error::Precondition(format!(
                    "{g} was not detected as slowly varying"
                )));
            }
        }
    }
    sv_inverse_unchecked(g, lambdas, u_grid)
}

pub(crate) fn sv_inverse_unchecked<T: Real>(
    g: &Generator<T>,
    lambdas: &[T],
    u_grid: &[T],
) -> Result<SvInverseReport<T>> {
    if let Some(bad) = lambdas.iter().find(|l| !(**l > T::one())) {
        return Err(Error::domain(format!("lambda must exceed 1, got {bad}")));
    }
    if u_grid.iter().any(|u| !(*u > T::zero() && *u < T::one())) {
        return Err(Error::domain("u grid must lie in (0, 1)"));
    }
    let mut series = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let mut ratios = Vec::new();
        let mut skipped = Vec::new();
        for &u in u_grid {
            let lu = u.ln();
            let llu = lu + lambda.ln();
            if llu >= T::zero() {
                skipped.push(u);
                continue;
            }
            let r = (g.log_psi_inv_from_log(llu)? - g.log_psi_inv_from_log(lu)?).exp();
            ratios.push((u, r));
        }
        // the ratio may rise before the asymptotic regime sets in; judge the trailing half
        let from = ratios.len().saturating_sub(1) / 2;
        let decreasing = ratios[from..].windows(2).all(|w| w[1].1 <= w[0].1);
        let pass = decreasing
            && ratios
                .last()
                .is_some_and(|(_, r)| *r <= T::lit(SV_RATIO_BOUND));
        series.push(SvInverseSeries {
            lambda,
            ratios,
            skipped,
            decreasing,
            pass,
        });
    }
    let pass = !series.is_empty() && series.iter().all(|s| s.pass);
    Ok(SvInverseReport { series, pass })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaPoint<T> {
    pub t: T,
    pub x: T,
    /// `ln phi(t + x g(t)) - ln phi(t)`.
    pub log_ratio: T,
    /// `|log_ratio + alpha x|`.
    pub deviation: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaReport<T> {
    pub alpha: T,
    pub points: Vec<GammaPoint<T>>,
    /// `(t, x)` pairs with `t + x g(t) < 0`.
    pub skipped: Vec<(T, T)>,
    /// Largest deviation over the shift set at the largest usable `t`.
    pub final_deviation: T,
    pub final_t: T,
    pub tolerance: T,
    pub pass: bool,
}

/// Checks `phi(t + x g(t)) / phi(t) -> exp(-alpha x)` pointwise on `x_set`.
pub fn check_gamma_class<T: Real>(
    g: &Generator<T>,
    alpha: T,
    scale: &dyn Fn(T) -> T,
    t_grid: &[T],
    x_set: &[T],
    tol: T,
) -> Result<GammaReport<T>> {
    if !(alpha > T::zero()) {
        return Err(Error::domain(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if t_grid.is_empty() || x_set.is_empty() {
        return Err(Error::Precondition("empty grid or shift set".into()));
    }
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    let mut final_t = None;
    let mut final_deviation = T::zero();
    for &t in t_grid {
        let gt = scale(t);
        if !(gt > T::zero()) || !gt.is_finite() {
            return Err(Error::domain(format!(
                "auxiliary scale not positive at t = {t}: {gt}"
            )));
        }
        let base = g.log_psi(t)?;
        let mut worst = T::zero();
        let mut any = false;
        for &x in x_set {
            let s = t + x * gt;
            if s < T::zero() {
                skipped.push((t, x));
                continue;
            }
            let log_ratio = g.log_psi(s)? - base;
            let deviation = (log_ratio + alpha * x).abs();
            worst = worst.max(deviation);
            any = true;
            points.push(GammaPoint {
                t,
                x,
                log_ratio,
                deviation,
            });
        }
        if any && final_t.is_none_or(|f| t > f) {
            final_t = Some(t);
            final_deviation = worst;
        }
    }
    let final_t = final_t.ok_or_else(|| Error::Precondition("no usable grid point".into()))?;
    Ok(GammaReport {
        alpha,
        points,
        skipped,
        final_deviation,
        final_t,
        tolerance: tol,
        pass: final_deviation <= tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfNeglectPoint<T> {
    pub t: T,
    /// `max_x |g(t + x g(t)) / g(t) - 1|`.
    pub shift_deviation: T,
    /// `g(t) / t`.
    pub relative_size: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleRatio<T> {
    pub lambda: T,
    /// Limit of `g(t) / g(lambda t)`.
    pub estimate: LimitEstimate<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfNeglectReport<T> {
    pub points: Vec<SelfNeglectPoint<T>>,
    pub shift_deviation: T,
    pub relative_size: T,
    pub scale_ratios: Vec<ScaleRatio<T>>,
    pub tolerance: T,
    pub pass: bool,
}

/// Checks `g(t + x g(t)) / g(t) -> 1` and `g(t) / t -> 0` at the end of an
/// increasing grid, and reports the limits of `g(t) / g(lambda t)`.
pub fn check_self_neglecting<T: Real>(
    scale: &dyn Fn(T) -> T,
    t_grid: &[T],
    x_set: &[T],
    lambdas: &[T],
    tol: T,
) -> Result<SelfNeglectReport<T>> {
    if t_grid.len() < 2 || t_grid.windows(2).any(|w| !(w[1] > w[0])) || !(t_grid[0] > T::zero()) {
        return Err(Error::domain(
            "t grid must be positive, increasing, with at least two points",
        ));
    }
    let mut points = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let gt = scale(t);
        if !(gt > T::zero()) || !gt.is_finite() {
            return Err(Error::domain(format!(
                "auxiliary scale not positive at t = {t}: {gt}"
            )));
        }
        let mut shift_deviation = T::zero();
        for &x in x_set {
            let s = t + x * gt;
            if s > T::zero() {
                shift_deviation = shift_deviation.max((scale(s) / gt - T::one()).abs());
            }
        }
        points.push(SelfNeglectPoint {
            t,
            shift_deviation,
            relative_size: gt / t,
        });
    }
    let mut scale_ratios = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let values: Vec<T> = t_grid
            .iter()
            .map(|t| scale(*t) / scale(lambda * *t))
            .collect();
        let noise: Vec<T> = values
            .iter()
            .map(|v| T::lit(8.0) * T::epsilon() * v.abs())
            .collect();
        let estimate =
            Extrapolation::new(Method::TwoPointRatio, tol).run(t_grid, &values, &noise)?;
        scale_ratios.push(ScaleRatio { lambda, estimate });
    }
    let last = points.last().unwrap();
    let (shift_deviation, relative_size) = (last.shift_deviation, last.relative_size);
    Ok(SelfNeglectReport {
        pass: shift_deviation <= tol && relative_size <= tol,
        points,
        shift_deviation,
        relative_size,
        scale_ratios,
        tolerance: tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmViolation<T> {
    pub order: usize,
    pub t: T,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmReport<T> {
    pub requested_order: usize,
    pub max_order_checked: usize,
    pub violations: Vec<CmViolation<T>>,
    pub tolerance: T,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Relative tolerance on `(-1)^n phi^{(n)}(t)`, scaled by `phi(t) / t^n`.
pub const CM_TOLERANCE: f64 = 1e-9;

/// Checks `(-1)^n phi^{(n)}(t) >= 0` for `n = 0..=max_order` on `t_grid`.
///
/// Orders beyond the generator's derivative capability are not checked; the
/// report then carries the highest order that was.
pub fn check_complete_monotonicity<T: Real>(
    g: &Generator<T>,
    max_order: usize,
    t_grid: &[T],
) -> Result<CmReport<T>> {
    if t_grid.iter().any(|t| !(*t > T::zero()) || !t.is_finite()) {
        return Err(Error::domain("t grid must be positive and finite"));
    }
    let cap = g.max_derivative_order();
    let checked = max_order.min(cap);
    let note = (checked < max_order).then(|| {
        format!(
            "derivatives of {} available up to order {cap}; higher orders not checked",
            g.name()
        )
    });
    let tol = T::lit(CM_TOLERANCE);
    let per_t: Vec<Result<Vec<CmViolation<T>>>> = t_grid
        .par_iter()
        .map(|&t| {
            let p = g.psi(t)?;
            let mut out = Vec::new();
            for n in 0..=checked {
                let v = g.psi_deriv(t, n)?;
                let signed = if n % 2 == 0 { v } else { -v };
                let bound = tol * p / t.powi(n as i32);
                if signed < -bound || signed.is_nan() {
                    out.push(CmViolation {
                        order: n,
                        t,
                        value: v,
                    });
                }
            }
            Ok(out)
        })
        .collect();
    let mut violations = Vec::new();
    for r in per_t {
        violations.extend(r?);
    }
    violations.sort_by_key(|v| v.order);
    Ok(CmReport {
        requested_order: max_order,
        max_order_checked: checked,
        pass: violations.is_empty(),
        violations,
        tolerance: tol,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::CustomGenerator;
    use crate::scalar::geometric_grid;
    use crate::tail_numeric::{auxiliary_grid, default_cm_grid, default_sv_u_grid};

    #[test]
    fn sv_inverse_examples() {
        let sv = Generator::log_sv();
        let r = check_sv_inverse_rapid(&sv, &[2.0], &[0.05]).unwrap();
        let e = std::f64::consts::E;
        let expect = (10f64.exp() - e) / (20f64.exp() - e);
        assert!((r.series[0].ratios[0].1 / expect - 1.0).abs() < 1e-12);
        let r = check_sv_inverse_rapid(&sv, &[1.5, 2.0, 4.0], &default_sv_u_grid()).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(!r.series[2].skipped.is_empty());
        let r = check_sv_inverse_rapid(&sv, &[1.0 + 1e-9], &[0.05]).unwrap();
        assert!((r.series[0].ratios[0].1 - 1.0).abs() < 1e-6);
        assert!(check_sv_inverse_rapid(&sv, &[1.0], &[0.05]).is_err());
        let c = Generator::clayton(1.0).unwrap();
        assert!(matches!(
            check_sv_inverse_rapid(&c, &[2.0], &[0.05]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn gamma_class_examples() {
        let f = Generator::<f64>::frank(1.0).unwrap();
        let r = check_gamma_class(&f, 1.0, &|_| 1.0, &[50.0], &[2.0], 1e-6).unwrap();
        assert!(r.pass && r.final_deviation < 1e-6);
        assert!(((r.points[0].log_ratio).exp() - (-2.0f64).exp()).abs() < 1e-6);
        let r = check_gamma_class(&f, 1.0, &|_| 1.0, &[3.0], &[0.0], 1e-12).unwrap();
        assert_eq!(r.points[0].log_ratio, 0.0);
        let g = Generator::gumbel(2.0).unwrap();
        let r = check_gamma_class(&g, 0.5, &|t: f64| t.sqrt(), &[1e8], &[1.0], 1e-3).unwrap();
        assert!(r.pass, "{r:?}");
        let r = check_gamma_class(&g, 0.5, &|t: f64| t.sqrt(), &[1.0, 4.0], &[-3.0, 1.0], 1e-3)
            .unwrap();
        assert_eq!(r.skipped.len(), 2);
    }

    #[test]
    fn self_neglect_examples() {
        let grid = geometric_grid(1.0, 1e8, 9);
        let xs = [-0.5, 0.5, 1.0, 2.0];
        let r = check_self_neglecting(&|t: f64| 1.0 + 0.0 * t, &grid, &xs, &[2.0], 1e-3).unwrap();
        assert!(r.pass);
        assert_eq!(r.shift_deviation, 0.0);
        let r = check_self_neglecting(&|t: f64| t.sqrt(), &grid, &xs, &[2.0], 1e-3).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.scale_ratios[0].estimate.value - 0.5f64.sqrt()).abs() < 1e-9);
        let r = check_self_neglecting(&|t: f64| t, &grid, &xs, &[2.0], 1e-3).unwrap();
        assert!(!r.pass);
        assert_eq!(r.relative_size, 1.0);
    }

    #[test]
    fn auxiliary_grid_resolves_slow_scales() {
        let g = Generator::gumbel(4.0).unwrap();
        let grid = auxiliary_grid(&|t: f64| g.hazard_scale(t).unwrap());
        let r = check_gamma_class(
            &g,
            1.0,
            &|t| g.hazard_scale(t).unwrap(),
            &grid,
            &[0.5, 1.0, 2.0],
            1e-3,
        )
        .unwrap();
        assert!(r.pass, "{}", r.final_deviation);
    }

    #[test]
    fn complete_monotonicity() {
        let grid = default_cm_grid();
        for s in [
            "clayton:theta=2",
            "gumbel:theta=3",
            "frank:theta=2",
            "joeb5:theta=2",
            "negbin:theta=0.3,alpha=2",
            "logsv",
        ] {
            let g: Generator<f64> = s.parse().unwrap();
            let r = check_complete_monotonicity(&g, 6, &grid).unwrap();
            assert!(r.pass, "{s}: {:?}", r.violations);
            assert_eq!(r.max_order_checked, 6);
        }
        let sq = Generator::custom(CustomGenerator::exp_neg_square());
        let r = check_complete_monotonicity(&sq, 2, &grid).unwrap();
        assert!(!r.pass);
        assert_eq!(r.violations[0].order, 2);
        let r = check_complete_monotonicity(&sq, 0, &grid).unwrap();
        assert!(r.pass);
        let plain = Generator::custom(CustomGenerator::new("exp", |t: f64| (-t).exp()));
        let r = check_complete_monotonicity(&plain, 12, &grid).unwrap();
        assert_eq!(r.max_order_checked, 8);
        assert!(r.note.is_some());
    }
}
