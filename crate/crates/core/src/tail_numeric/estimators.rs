use serde::{Deserialize, Serialize};

use super::limits::{Extrapolation, LimitEstimate, Method};
use crate::copula::{log_cdf_unchecked, upper_joint_exceed, WeightVector};
use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::scalar::Real;

fn noise_scale<T: Real>() -> T {
    T::lit(8.0) * T::epsilon()
}

/// Rejects grids that are too short, leave `(lo, hi)`, or are not monotone in
/// the requested direction.
fn check_grid<T: Real>(grid: &[T], min_len: usize, lo: T, hi: T, increasing: bool) -> Result<()> {
    if grid.len() < min_len {
        return Err(Error::Precondition(format!(
            "grid needs at least {min_len} points, got {}",
            grid.len()
        )));
    }
    if let Some(bad) = grid.iter().find(|x| !(**x > lo && **x < hi)) {
        return Err(Error::domain(format!(
            "grid point {bad} outside ({lo}, {hi})"
        )));
    }
    let ordered = grid
        .windows(2)
        .all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] });
    if !ordered {
        let dir = if increasing {
            "increasing"
        } else {
            "decreasing"
        };
        return Err(Error::domain(format!("grid must be strictly {dir}")));
    }
    Ok(())
}

fn check_geometric<T: Real>(grid: &[T]) -> Result<()> {
    let r0 = (grid[1] / grid[0]).ln();
    let tol = T::lit(1e-6) * r0.abs();
    if grid
        .windows(2)
        .any(|w| ((w[1] / w[0]).ln() - r0).abs() > tol)
    {
        return Err(Error::domain("grid must be geometric"));
    }
    Ok(())
}

fn log_cdf_along<T: Real>(g: &Generator<T>, log_u: T, log_w: &[T]) -> Result<T> {
    let point: Vec<T> = log_w
        .iter()
        .map(|lw| (log_u + *lw).min(T::zero()))
        .collect();
    log_cdf_unchecked(g, &point)
}

/// Tail order `k` as the log-log slope of `C(u, ..., u)` along a decreasing
/// geometric grid in `(0, 1)`.
pub fn estimate_tail_order<T: Real>(
    g: &Generator<T>,
    d: usize,
    u_grid: &[T],
    tol: T,
) -> Result<LimitEstimate<T>> {
    check_grid(u_grid, 4, T::zero(), T::one(), false)?;
    check_geometric(u_grid)?;
    let ones = vec![T::zero(); d];
    let mut logs = Vec::with_capacity(u_grid.len());
    for u in u_grid {
        logs.push(log_cdf_along(g, u.ln(), &ones)?);
    }
    let mut params = Vec::new();
    let mut slopes = Vec::new();
    let mut noise = Vec::new();
    for i in 0..u_grid.len() - 1 {
        let dl = u_grid[i].ln() - u_grid[i + 1].ln();
        params.push(u_grid[i + 1]);
        slopes.push((logs[i] - logs[i + 1]) / dl);
        noise.push(noise_scale::<T>() * (logs[i].abs() + logs[i + 1].abs()) / dl);
    }
    Extrapolation::new(Method::LogSlope, tol)
        .with_floor(T::one())
        .run(&params, &slopes, &noise)
}

/// `C(u w) / u^k` (raw) or `C(u w) / C(u 1)` (normalized) followed to `u -> 0`.
pub fn estimate_tail_dependence<T: Real>(
    g: &Generator<T>,
    w: &WeightVector<T>,
    k: T,
    u_grid: &[T],
    normalized: bool,
    tol: T,
) -> Result<LimitEstimate<T>> {
    if !w.is_positive() {
        return Err(Error::domain(
            "tail dependence needs strictly positive weights",
        ));
    }
    check_grid(u_grid, 3, T::zero(), T::one(), false)?;
    let log_w: Vec<T> = w.values().iter().map(|x| x.ln()).collect();
    let ones = vec![T::zero(); w.dim()];
    let mut values = Vec::with_capacity(u_grid.len());
    let mut noise = Vec::with_capacity(u_grid.len());
    for &u in u_grid {
        let lu = u.ln();
        let num = log_cdf_along(g, lu, &log_w)?;
        let den = if normalized {
            log_cdf_along(g, lu, &ones)?
        } else {
            k * lu
        };
        let v = (num - den).exp();
        values.push(v);
        noise.push(noise_scale::<T>() * (num.abs() + den.abs()) * v);
    }
    Extrapolation::new(Method::TwoPointRatio, tol).run(u_grid, &values, &noise)
}

/// `P(U_i > 1 - u w_i for some i) / u` followed to `u -> 0`; points with
/// `u max(w) >= 1` are dropped.
pub fn estimate_upper_exponent<T: Real>(
    g: &Generator<T>,
    w: &WeightVector<T>,
    u_grid: &[T],
    tol: T,
) -> Result<LimitEstimate<T>> {
    check_grid(u_grid, 3, T::zero(), T::one(), false)?;
    let cap = w.max();
    let grid: Vec<T> = u_grid
        .iter()
        .copied()
        .filter(|u| *u * cap < T::one())
        .collect();
    let mut values = Vec::with_capacity(grid.len());
    for &u in &grid {
        values.push(upper_joint_exceed(g, u, w)? / u);
    }
    // 1 - phi(s) carries an absolute error near eps, i.e. eps/u relative.
    let noise: Vec<T> = grid.iter().map(|u| noise_scale::<T>() / *u).collect();
    let mut est = Extrapolation::new(Method::TwoPointRatio, tol).run(&grid, &values, &noise)?;
    if grid.len() < u_grid.len() {
        est.warnings.push(format!(
            "{} grid points with u*max(w) >= 1 dropped",
            u_grid.len() - grid.len()
        ));
    }
    Ok(est)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Divergence {
    /// `phi(dt) / phi(t)^k -> 0`: `k` too small.
    ToZero,
    /// `phi(dt) / phi(t)^k -> inf`: `k` too large.
    ToInfinity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum TauOutcome<T> {
    Finite(LimitEstimate<T>),
    /// The log ratio drifted without bound: the supplied `k` is not the tail order.
    NoFiniteTau {
        direction: Divergence,
        /// `(t, ln phi(dt) - k ln phi(t))`.
        log_ratios: Vec<(T, T)>,
    },
}

impl<T: Real> TauOutcome<T> {
    pub fn estimate(&self) -> Option<&LimitEstimate<T>> {
        match self {
            TauOutcome::Finite(e) => Some(e),
            TauOutcome::NoFiniteTau { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, TauOutcome::Finite(_))
    }
}

/// Magnitude the log ratio must exceed, while growing, to be called divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 10.0;

/// `tau = lim phi(d t) / phi(t)^k`, evaluated as a log ratio on an increasing grid.
pub fn estimate_tau<T: Real>(
    g: &Generator<T>,
    k: T,
    d: usize,
    t_grid: &[T],
    tol: T,
) -> Result<TauOutcome<T>> {
    let dd = T::from_count(d);
    if !(k >= T::one() && k <= dd) {
        return Err(Error::domain(format!(
            "tail order must lie in [1, {d}], got {k}"
        )));
    }
    check_grid(t_grid, 3, T::zero(), T::infinity(), true)?;
    let mut ratios = Vec::with_capacity(t_grid.len());
    let mut noise = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let a = g.log_psi(dd * t)?;
        let b = g.log_psi(t)?;
        ratios.push(a - k * b);
        noise.push(noise_scale::<T>() * (a.abs() + k * b.abs()));
    }
    let n = ratios.len();
    let tail = &ratios[n - 3..];
    let growing = tail.windows(2).all(|w| w[1].abs() > w[0].abs());
    let same_sign = tail.iter().all(|r| *r > T::zero()) || tail.iter().all(|r| *r < T::zero());
    if growing && same_sign && ratios[n - 1].abs() > T::lit(DIVERGENCE_THRESHOLD) {
        let direction = if ratios[n - 1] < T::zero() {
            Divergence::ToZero
        } else {
            Divergence::ToInfinity
        };
        return Ok(TauOutcome::NoFiniteTau {
            direction,
            log_ratios: t_grid.iter().copied().zip(ratios).collect(),
        });
    }
    // Absolute error in the log ratio is relative error in tau.
    let mut est = Extrapolation::new(Method::TwoPointRatio, tol)
        .with_floor(T::one())
        .run(t_grid, &ratios, &noise)?;
    est.value = est.value.exp();
    for p in &mut est.grid_points {
        p.1 = p.1.exp();
    }
    Ok(TauOutcome::Finite(est))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    /// Settles at a positive index.
    Finite,
    /// Tends to zero: slow variation.
    Vanishing,
    /// Grows without bound: rapid variation.
    Diverging,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RvIndexEstimate<T> {
    pub estimate: LimitEstimate<T>,
    pub trend: Trend,
}

/// Largest index magnitude still read as zero.
pub const VANISHING_INDEX: f64 = 1e-3;

/// Variation index `alpha = -lim ln(phi(r t) / phi(t)) / ln r` on an
/// increasing grid, with `r` the ratio of consecutive grid points.
pub fn estimate_rv_index<T: Real>(
    g: &Generator<T>,
    t_grid: &[T],
    tol: T,
) -> Result<RvIndexEstimate<T>> {
    check_grid(t_grid, 4, T::zero(), T::infinity(), true)?;
    let mut logs = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        logs.push(g.log_psi(t)?);
    }
    let mut params = Vec::new();
    let mut idx = Vec::new();
    let mut noise = Vec::new();
    for i in 0..t_grid.len() - 1 {
        let lr = (t_grid[i + 1] / t_grid[i]).ln();
        params.push(t_grid[i]);
        idx.push(-(logs[i + 1] - logs[i]) / lr);
        noise.push(noise_scale::<T>() * (logs[i].abs() + logs[i + 1].abs()) / lr);
    }
    let estimate = Extrapolation::new(Method::LogSlope, tol)
        .with_floor(T::one())
        .run(&params, &idx, &noise)?;
    let s: Vec<T> = estimate.grid_points.iter().map(|p| p.1).collect();
    let m = s.len();
    let diffs: Vec<T> = s.windows(2).map(|w| w[1] - w[0]).collect();
    let rising = m >= 3 && diffs[m - 2] > T::zero() && diffs[m - 3] > T::zero();
    let accelerating = rising && diffs[m - 2] >= diffs[m - 3];
    let trend = if accelerating || (rising && s[m - 1] > T::lit(1e3)) {
        Trend::Diverging
    } else if estimate.value.abs() <= T::lit(VANISHING_INDEX)
        && s[m - 1] >= T::zero()
        && diffs[m - 2] <= T::zero()
    {
        Trend::Vanishing
    } else {
        Trend::Finite
    };
    Ok(RvIndexEstimate { estimate, trend })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::geometric_grid;
    use crate::tail_numeric::{default_t_grid, default_u_grid};

    fn w(v: &[f64]) -> WeightVector<f64> {
        WeightVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn tail_order_examples() {
        let g = Generator::<f64>::gumbel(2.0).unwrap();
        let e = estimate_tail_order(&g, 2, &default_u_grid(&g), 1e-3).unwrap();
        assert!((e.value - 2f64.sqrt()).abs() < 1e-12, "{e:?}");
        assert!(e.residual < 1e-12);
        let g = Generator::<f64>::gumbel(1.0).unwrap();
        let e = estimate_tail_order(&g, 3, &default_u_grid(&g), 1e-3).unwrap();
        assert!((e.value - 3.0).abs() < 1e-12);
        let g = Generator::<f64>::clayton(2.0).unwrap();
        let e = estimate_tail_order(&g, 2, &default_u_grid(&g), 1e-3).unwrap();
        assert!((e.value - 1.0).abs() < 1e-3);
        assert!(e.converged);
    }

    #[test]
    fn tail_order_rejects_bad_grids() {
        let g = Generator::gumbel(2.0).unwrap();
        assert!(estimate_tail_order(&g, 2, &[1e-2, 1e-3, 1e-4], 1e-3).is_err());
        assert!(estimate_tail_order(&g, 2, &[1e-4, 1e-3, 1e-2, 1e-1], 1e-3).is_err());
        assert!(estimate_tail_order(&g, 2, &[1e-2, 1e-3, 1e-5, 1e-6], 1e-3).is_err());
    }

    #[test]
    fn tail_dependence_examples() {
        let sv = Generator::<f64>::log_sv();
        let grid = default_u_grid(&sv);
        let e = estimate_tail_dependence(&sv, &w(&[1.0, 2.0]), 1.0, &grid, false, 1e-3).unwrap();
        assert!((e.value - 1.0).abs() < 1e-2, "{e:?}");
        let f = Generator::frank(1.0).unwrap();
        let grid = default_u_grid(&f);
        let e = estimate_tail_dependence(&f, &w(&[1.0, 1.0]), 2.0, &grid, false, 1e-3).unwrap();
        assert!((e.value / 1.5819767068693265 - 1.0).abs() < 1e-3, "{e:?}");
        let e = estimate_tail_dependence(&f, &w(&[1.0, 1.0]), 2.0, &grid, true, 1e-3).unwrap();
        assert_eq!(e.value, 1.0);
        assert!(estimate_tail_dependence(&f, &w(&[0.0, 1.0]), 2.0, &grid, true, 1e-3).is_err());
    }

    #[test]
    fn normalized_is_ratio_of_raw() {
        let f = Generator::frank(2.0).unwrap();
        let grid = default_u_grid(&f);
        let raw_w = estimate_tail_dependence(&f, &w(&[2.0, 1.5]), 2.0, &grid, false, 1e-3).unwrap();
        let raw_1 = estimate_tail_dependence(&f, &w(&[1.0, 1.0]), 2.0, &grid, false, 1e-3).unwrap();
        let norm = estimate_tail_dependence(&f, &w(&[2.0, 1.5]), 2.0, &grid, true, 1e-3).unwrap();
        assert!(raw_w.converged && raw_1.converged && norm.converged);
        assert!((norm.value - raw_w.value / raw_1.value).abs() < 1e-9 * norm.value);
    }

    #[test]
    fn upper_exponent_of_gumbel() {
        let g = Generator::gumbel(2.0).unwrap();
        let grid = geometric_grid(1e-2, 1e-6, 5);
        let e = estimate_upper_exponent(&g, &w(&[1.0, 1.0]), &grid, 1e-3).unwrap();
        assert!((e.value - 2f64.sqrt()).abs() < 1e-3, "{e:?}");
    }

    #[test]
    fn tau_examples() {
        let grid = geometric_grid(1.0, 100.0, 9);
        let b5 = Generator::<f64>::joe_b5(2.0).unwrap();
        let e = estimate_tau(&b5, 2.0, 2, &grid, 1e-6).unwrap();
        let e = e.estimate().unwrap();
        assert!((e.value - 2.0).abs() < 2e-6 && e.converged, "{e:?}");
        let g = Generator::gumbel(2.0).unwrap();
        let e = estimate_tau(&g, 2f64.sqrt(), 2, &default_t_grid(), 1e-6).unwrap();
        assert!((e.estimate().unwrap().value - 1.0).abs() < 1e-9);
        let nb = Generator::neg_binomial(0.25, 2.0).unwrap();
        let e = estimate_tau(&nb, 2.0, 2, &grid, 1e-6).unwrap();
        assert!((e.estimate().unwrap().value / (0.75f64).powi(-2) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn wrong_order_has_no_finite_tau() {
        let grid = default_t_grid();
        let f = Generator::frank(1.0).unwrap();
        match estimate_tau(&f, 1.0, 2, &grid, 1e-6).unwrap() {
            TauOutcome::NoFiniteTau { direction, .. } => assert_eq!(direction, Divergence::ToZero),
            other => panic!("{other:?}"),
        }
        let g = Generator::gumbel(2.0).unwrap();
        match estimate_tau(&g, 2.0, 2, &grid, 1e-6).unwrap() {
            TauOutcome::NoFiniteTau { direction, .. } => {
                assert_eq!(direction, Divergence::ToInfinity)
            }
            other => panic!("{other:?}"),
        }
        assert!(estimate_tau(&g, 3.0, 2, &grid, 1e-6).is_err());
    }

    #[test]
    fn rv_index_examples() {
        let grid = default_t_grid();
        let c = Generator::<f64>::clayton(4.0).unwrap();
        let e = estimate_rv_index(&c, &grid, 1e-4).unwrap();
        assert_eq!(e.trend, Trend::Finite);
        assert!((e.estimate.value - 0.25).abs() < 1e-4, "{e:?}");
        let sv = Generator::<f64>::log_sv();
        let long = geometric_grid(1.0, 1e12, 13);
        let e = estimate_rv_index(&sv, &long, 1e-3).unwrap();
        assert_eq!(e.trend, Trend::Vanishing, "{e:?}");
        assert!(e.estimate.value.abs() < 1e-3);
        let f = Generator::frank(1.0).unwrap();
        let e = estimate_rv_index(&f, &grid, 1e-3).unwrap();
        assert_eq!(e.trend, Trend::Diverging);
        assert!(!e.estimate.converged);
    }
}
