use crate::error::{Error, Result};
use crate::scalar::Real;

/// Kolmogorov-Smirnov distance between the sample and Uniform(0, 1).
pub fn ks_uniform<T: Real>(sample: &[T]) -> Result<T> {
    if sample.is_empty() {
        return Err(Error::domain("empty sample"));
    }
    let mut x = sample.to_vec();
    x.sort_by(|a, b| a.partial_cmp(b).expect("no NaN in sample"));
    let n = T::from_count(x.len());
    let mut d = T::zero();
    for (i, v) in x.iter().enumerate() {
        let lo = *v - T::from_count(i) / n;
        let hi = T::from_count(i + 1) / n - *v;
        d = d.max(lo).max(hi);
    }
    Ok(d)
}

/// Asymptotic 1% critical value of the one-sample KS statistic.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}

/// Kendall's tau-b in `O(n log n)` by counting merge-sort exchanges.
pub fn kendall_tau<T: Real>(x: &[T], y: &[T]) -> Result<T> {
    if x.len() != y.len() {
        return Err(Error::domain("samples differ in length"));
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::domain("need at least two pairs"));
    }
    let mut pairs: Vec<(T, T)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| a.partial_cmp(b).expect("no NaN in sample"));

    let tie_pairs = |len: usize| (len * (len - 1) / 2) as u128;
    let mut ties_x = 0u128;
    let mut ties_xy = 0u128;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && pairs[j].0 == pairs[i].0 {
            j += 1;
        }
        ties_x += tie_pairs(j - i);
        let mut k = i;
        while k < j {
            let mut m = k + 1;
            while m < j && pairs[m].1 == pairs[k].1 {
                m += 1;
            }
            ties_xy += tie_pairs(m - k);
            k = m;
        }
        i = j;
    }

    let mut ys: Vec<T> = pairs.iter().map(|p| p.1).collect();
    let mut buf = ys.clone();
    let swaps = merge_count(&mut ys, &mut buf);

    let mut ties_y = 0u128;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && ys[j] == ys[i] {
            j += 1;
        }
        ties_y += tie_pairs(j - i);
        i = j;
    }

    let total = tie_pairs(n);
    let numerator =
        total as f64 - ties_x as f64 - ties_y as f64 + ties_xy as f64 - 2.0 * swaps as f64;
    let denom = ((total - ties_x) as f64 * (total - ties_y) as f64).sqrt();
    if denom == 0.0 {
        return Err(Error::domain("a sample is constant"));
    }
    Ok(T::lit(numerator / denom))
}

/// Standard deviation of Kendall's tau under independence.
pub fn kendall_tau_null_sd(n: usize) -> f64 {
    let n = n as f64;
    (2.0 * (2.0 * n + 5.0) / (9.0 * n * (n - 1.0))).sqrt()
}

// Sorts `v` and returns the number of inversions.
fn merge_count<T: Real>(v: &mut [T], buf: &mut [T]) -> u128 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = {
        let (l, r) = v.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        merge_count(l, bl) + merge_count(r, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            swaps += (mid - i) as u128;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}
