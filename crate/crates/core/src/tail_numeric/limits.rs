use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    TwoPointRatio,
    LogSlope,
    AitkenAccelerated,
    /// Polynomial extrapolation in `1 / |ln p|` for logarithmically slow limits.
    LogarithmicExtrapolation,
}

/// A limit read off a sequence evaluated along a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate<T> {
    pub value: T,
    /// `(grid parameter, sequence value)` in grid order.
    pub grid_points: Vec<(T, T)>,
    pub converged: bool,
    /// Relative change over the last refinement step.
    pub residual: T,
    pub tolerance: T,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// How a sequence is turned into a limit.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Extrapolation<T> {
    pub base: Method,
    pub tolerance: T,
    /// Residuals are relative to `max(|value|, floor)`.
    pub floor: T,
}

impl<T: Real> Extrapolation<T> {
    pub fn new(base: Method, tolerance: T) -> Self {
        Extrapolation {
            base,
            tolerance,
            floor: T::min_positive_value(),
        }
    }

    pub fn with_floor(mut self, floor: T) -> Self {
        self.floor = floor;
        self
    }

    /// Extrapolates `values` (paired with `params`). `noise[i]` bounds the
    /// rounding error of `values[i]`; differences below it count as converged.
    /// Non-finite values truncate the sequence with a warning.
    pub fn run(&self, params: &[T], values: &[T], noise: &[T]) -> Result<LimitEstimate<T>> {
        let mut warnings = Vec::new();
        let usable = values.iter().take_while(|v| v.is_finite()).count();
        if usable < values.len() {
            warnings.push(format!(
                "grid truncated after {usable} of {} points: value not representable",
                values.len()
            ));
        }
        if usable < 2 {
            return Err(Error::Precondition(format!(
                "need at least two representable grid values, got {usable}"
            )));
        }
        let p = &params[..usable];
        let s = &values[..usable];
        let grid_points: Vec<(T, T)> = p.iter().copied().zip(s.iter().copied()).collect();
        let n = usable;
        let last = s[n - 1];
        let diffs: Vec<T> = s.windows(2).map(|w| w[1] - w[0]).collect();
        let dn = diffs[n - 2];
        let noise_last = noise.get(n - 1).copied().unwrap_or(T::zero())
            + noise.get(n - 2).copied().unwrap_or(T::zero());
        let den = |v: T| v.abs().max(self.floor);

        let finish = |value: T, residual: T, method: Method, warnings: Vec<String>| LimitEstimate {
            value,
            grid_points: grid_points.clone(),
            converged: residual <= self.tolerance,
            residual,
            tolerance: self.tolerance,
            method,
            warnings,
        };

        if dn.abs() <= noise_last {
            let r = dn.abs() / den(last);
            return Ok(finish(last, r, self.base, warnings));
        }

        let monotone = n >= 3 && {
            let tail = &diffs[diffs.len().saturating_sub(3)..];
            tail.iter().all(|d| *d > T::zero()) || tail.iter().all(|d| *d < T::zero())
        };
        if monotone {
            let q = dn / diffs[n - 3];
            let aitken = (q < T::one()).then(|| {
                let step = |i: usize| {
                    // uses s[i-2], s[i-1], s[i]
                    let d1 = s[i - 1] - s[i - 2];
                    let d2 = s[i] - s[i - 1];
                    let denom = d2 - d1;
                    if denom == T::zero() {
                        s[i]
                    } else {
                        s[i] - d2 * d2 / denom
                    }
                };
                let a = step(n - 1);
                let r = if n >= 4 {
                    (a - step(n - 2)).abs() / den(a)
                } else {
                    (a - last).abs() / den(a)
                };
                (a, r)
            });
            // logarithmic convergence: polynomial in 1/|ln p| through the last points
            let m = n.min(4);
            let usable_params = p[n - m..].iter().all(|x| *x > T::zero() && *x != T::one());
            let logarithmic = (q < T::one() && n >= 4 && usable_params).then(|| {
                let hi: Vec<T> = p[n - m..].iter().map(|x| x.ln().abs().recip()).collect();
                let hi = &hi[..];
                let si = &s[n - m..];
                let full = neville_at_zero(hi, si);
                let reduced = neville_at_zero(&hi[1..], &si[1..]);
                (full, (full - reduced).abs() / den(full))
            });
            match (aitken, logarithmic) {
                (Some((_, ra)), Some((l, rl))) if q >= T::lit(0.9) || rl < ra => {
                    warnings.push("slow monotone convergence; extrapolated in 1/|ln p|".into());
                    return Ok(finish(l, rl, Method::LogarithmicExtrapolation, warnings));
                }
                (Some((a, ra)), _) if q < T::lit(0.9) => {
                    return Ok(finish(a, ra, Method::AitkenAccelerated, warnings));
                }
                _ => {}
            }
        }
        let r = dn.abs() / den(last);
        Ok(finish(last, r, self.base, warnings))
    }
}

/// Value at `x = 0` of the interpolating polynomial through `(x_i, y_i)`.
fn neville_at_zero<T: Real>(x: &[T], y: &[T]) -> T {
    let mut p = y.to_vec();
    let n = x.len();
    for level in 1..n {
        for i in 0..(n - level) {
            let j = i + level;
            p[i] = (x[j] * p[i] - x[i] * p[i + 1]) / (x[j] - x[i]);
        }
    }
    p[0]
}
