//! Derivative machinery: Bell polynomials (Faà di Bruno), polylogarithms of
//! negative order via Eulerian numbers, Hermite polynomials and central
//! divided differences.

use crate::scalar::Real;

/// Highest order served by the closed-form derivative routines.
pub const MAX_ANALYTIC_ORDER: usize = 24;

/// Highest order attempted with divided differences.
pub const MAX_NUMERIC_ORDER: usize = 8;

fn binomial_rows<T: Real>(n: usize) -> Vec<Vec<T>> {
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![T::one(); i + 1];
        for j in 1..i {
            row[j] = rows[i - 1][j - 1] + rows[i - 1][j];
        }
        rows.push(row);
    }
    rows
}

/// Partial Bell polynomials `B[n][k] = B_{n,k}(x_1, ..., x_{n-k+1})` for
/// `n, k <= x.len()`, where `x[i]` holds `x_{i+1}`.
pub fn partial_bell<T: Real>(x: &[T]) -> Vec<Vec<T>> {
    let n = x.len();
    let binom = binomial_rows::<T>(n);
    let mut b = vec![vec![T::zero(); n + 1]; n + 1];
    b[0][0] = T::one();
    for m in 1..=n {
        for k in 1..=m {
            let mut acc = T::zero();
            for i in 1..=(m - k + 1) {
                acc += binom[m - 1][i - 1] * x[i - 1] * b[m - i][k - 1];
            }
            b[m][k] = acc;
        }
    }
    b
}

/// `n`-th derivative of `exp(L(t))` divided by `exp(L(t))`, given
/// `dl[i] = L^{(i+1)}(t)` for `i < n`.
pub fn exp_composition_factor<T: Real>(dl: &[T], n: usize) -> T {
    if n == 0 {
        return T::one();
    }
    let b = partial_bell(&dl[..n]);
    b[n][1..=n].iter().copied().sum()
}

/// `n`-th derivative of `f(h(t))` given `df[k-1] = f^{(k)}(h(t))` and
/// `dh[i] = h^{(i+1)}(t)`.
pub fn faa_di_bruno<T: Real>(df: &[T], dh: &[T], n: usize) -> T {
    let b = partial_bell(&dh[..n]);
    (1..=n).map(|k| df[k - 1] * b[n][k]).sum()
}

/// `sum_{k>=1} k^s x^k` for `0 <= x < 1`, with `one_minus_x = 1 - x`
/// supplied by the caller for accuracy near `x = 1`.
pub fn polylog_neg<T: Real>(s: usize, x: T, one_minus_x: T) -> T {
    if s == 0 {
        return x / one_minus_x;
    }
    // Eulerian numbers A(s, i), i < s.
    let mut row = vec![T::one()];
    for m in 2..=s {
        let mut next = vec![T::zero(); m];
        for i in 0..m {
            let keep = if i < row.len() {
                T::from_count(i + 1) * row[i]
            } else {
                T::zero()
            };
            let shift = if i >= 1 {
                T::from_count(m - i) * row[i - 1]
            } else {
                T::zero()
            };
            next[i] = keep + shift;
        }
        row = next;
    }
    let poly = row.iter().rev().fold(T::zero(), |acc, &c| acc * x + c);
    x * poly / one_minus_x.powi(s as i32 + 1)
}

/// Physicists' Hermite polynomial `H_n(t)`.
pub fn hermite<T: Real>(n: usize, t: T) -> T {
    let two = T::lit(2.0);
    let (mut h0, mut h1) = (T::one(), two * t);
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let h2 = two * t * h1 - two * T::from_count(k) * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Falling factorial `a (a-1) ... (a-m+1)`.
pub fn falling_factorial<T: Real>(a: T, m: usize) -> T {
    (0..m).fold(T::one(), |acc, j| acc * (a - T::from_count(j)))
}

/// Central divided difference of order `n` with step `h = t * eps^{1/(n+2)}`.
///
/// The stencil is shrunk if it would leave `[0, inf)`.
pub fn divided_difference<T: Real>(f: &dyn Fn(T) -> T, t: T, n: usize) -> T {
    if n == 0 {
        return f(t);
    }
    let half = T::from_count(n) / T::lit(2.0);
    let mut h = t * T::epsilon().powf(T::one() / T::from_count(n + 2));
    if t - half * h < T::zero() {
        h = t / half;
    }
    let binom = binomial_rows::<T>(n);
    let mut acc = T::zero();
    for k in 0..=n {
        let c = binom[n][k];
        let x = t + (half - T::from_count(k)) * h;
        let term = c * f(x);
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc / h.powi(n as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_reproduces_exp_derivatives() {
        // L(t) = -2t: d^n/dt^n exp(L) / exp(L) = (-2)^n.
        let dl = [-2.0_f64, 0.0, 0.0, 0.0, 0.0];
        for n in 0..=5 {
            let v = exp_composition_factor(&dl, n);
            assert!((v - (-2.0f64).powi(n as i32)).abs() < 1e-12);
        }
        // L(t) = t^2 at t = 1: exp(t^2)'' / exp(t^2) = 4t^2 + 2 = 6.
        let dl = [2.0_f64, 2.0, 0.0];
        assert!((exp_composition_factor(&dl, 2) - 6.0).abs() < 1e-12);
        assert!((exp_composition_factor(&dl, 3) - (8.0 + 12.0)).abs() < 1e-12);
    }

    #[test]
    fn polylog_matches_series() {
        let x = 0.37_f64;
        for s in 0..7 {
            let series: f64 = (1..4000)
                .map(|k| (k as f64).powi(s as i32) * x.powi(k))
                .sum();
            let closed = polylog_neg(s, x, 1.0 - x);
            assert!((closed - series).abs() <= 1e-12 * series, "s={s}");
        }
    }

    #[test]
    fn hermite_low_orders() {
        let t = 0.3_f64;
        assert_eq!(hermite(0, t), 1.0);
        assert!((hermite(2, t) - (4.0 * t * t - 2.0)).abs() < 1e-15);
        assert!((hermite(3, t) - (8.0 * t.powi(3) - 12.0 * t)).abs() < 1e-15);
    }

    #[test]
    fn divided_differences_of_exponential() {
        let f = |t: f64| (-t).exp();
        for n in 0..=6 {
            let v = divided_difference(&f, 1.5, n);
            let exact = (-1.0f64).powi(n as i32) * (-1.5f64).exp();
            assert!((v - exact).abs() <= 1e-3 * exact.abs(), "n={n} v={v}");
        }
    }
}
