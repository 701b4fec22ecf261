use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{BatchKind, SampleBatch};
use crate::copula::WeightVector;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A proportion with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct EmpiricalEstimate<T> {
    pub value: T,
    pub std_error: T,
    pub hits: usize,
    pub n: usize,
}

impl<T: Real> EmpiricalEstimate<T> {
    fn from_hits(hits: usize, n: usize) -> Self {
        let nn = T::from_count(n);
        let p = T::from_count(hits) / nn;
        EmpiricalEstimate {
            value: p,
            std_error: (p * (T::one() - p) / nn).sqrt(),
            hits,
            n,
        }
    }

    /// `|value - reference|` in units of the standard error evaluated at `reference`.
    pub fn z_score(&self, reference: T) -> T {
        let se = (reference * (T::one() - reference) / T::from_count(self.n)).sqrt();
        (self.value - reference).abs() / se
    }
}

fn copula_batch<T: Real>(batch: &SampleBatch<T>) -> Result<()> {
    if batch.is_empty() {
        return Err(Error::domain("empty batch"));
    }
    if batch.kind() != BatchKind::Copula {
        return Err(Error::domain(
            "empirical copula statistics need a copula batch",
        ));
    }
    Ok(())
}

fn count_below<T: Real>(batch: &SampleBatch<T>, bounds: &[T]) -> usize {
    batch
        .data()
        .par_chunks_exact(batch.dim())
        .filter(|row| row.iter().zip(bounds).all(|(u, b)| *u <= *b))
        .count()
}

/// Empirical copula `C_n(u)`: fraction of rows with `U_i <= u_i` for all `i`.
pub fn empirical_copula<T: Real>(batch: &SampleBatch<T>, u: &[T]) -> Result<EmpiricalEstimate<T>> {
    copula_batch(batch)?;
    if u.len() != batch.dim() {
        return Err(Error::domain(format!(
            "point has {} coordinates, batch has {}",
            u.len(),
            batch.dim()
        )));
    }
    Ok(EmpiricalEstimate::from_hits(
        count_below(batch, u),
        batch.len(),
    ))
}

/// Empirical `P(U_i <= u w_i for all i)`; bounds at or above one are certain.
pub fn empirical_lower_tail<T: Real>(
    batch: &SampleBatch<T>,
    u: T,
    w: &WeightVector<T>,
) -> Result<EmpiricalEstimate<T>> {
    if !(u > T::zero()) || !u.is_finite() {
        return Err(Error::domain(format!("scale u must be positive, got {u}")));
    }
    let bounds: Vec<T> = w.values().iter().map(|x| *x * u).collect();
    empirical_copula(batch, &bounds)
}

/// One point of the empirical `C_n(u 1) / u` curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct LambdaPoint<T> {
    pub u: T,
    pub hits: usize,
    /// `None` when no row fell in the corner.
    pub ratio: Option<T>,
    pub std_error: Option<T>,
    pub censored: bool,
}

/// `C_n(u 1) / u` along `u_grid`; grid points without hits are censored.
pub fn empirical_lambda_l<T: Real>(
    batch: &SampleBatch<T>,
    u_grid: &[T],
) -> Result<Vec<LambdaPoint<T>>> {
    copula_batch(batch)?;
    if let Some(bad) = u_grid.iter().find(|u| !(**u > T::zero() && **u < T::one())) {
        return Err(Error::domain(format!("grid point {bad} outside (0, 1)")));
    }
    let mut out = Vec::with_capacity(u_grid.len());
    for &u in u_grid {
        let bounds = vec![u; batch.dim()];
        let est = EmpiricalEstimate::<T>::from_hits(count_below(batch, &bounds), batch.len());
        let censored = est.hits == 0;
        out.push(LambdaPoint {
            u,
            hits: est.hits,
            ratio: (!censored).then(|| est.value / u),
            std_error: (!censored).then(|| est.std_error / u),
            censored,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn batch(rows: &[[f64; 2]]) -> SampleBatch<f64> {
        SampleBatch::from_rows(
            BatchKind::Copula,
            2,
            rows.iter().flatten().copied().collect(),
        )
        .unwrap()
    }

    #[test]
    fn counts_corner_hits() {
        let b = batch(&[[0.1, 0.2], [0.5, 0.05], [0.02, 0.03], [0.9, 0.9]]);
        let e = empirical_copula(&b, &[0.2, 0.2]).unwrap();
        assert_eq!(e.hits, 2);
        assert_eq!(e.value, 0.5);
        assert!((e.std_error - 0.25).abs() < 1e-15);
        let w = WeightVector::new(vec![10.0, 10.0]).unwrap();
        assert_eq!(empirical_lower_tail(&b, 0.5, &w).unwrap().value, 1.0);
        let w = WeightVector::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(empirical_lower_tail(&b, 0.5, &w).unwrap().value, 0.0);
    }

    #[test]
    fn censors_empty_corners() {
        let b = batch(&[[0.1, 0.2], [0.5, 0.05]]);
        let pts = empirical_lambda_l(&b, &[0.3, 0.01]).unwrap();
        assert_eq!(pts[0].ratio, Some(0.5 / 0.3));
        assert!(pts[1].censored && pts[1].ratio.is_none());
    }

    #[test]
    fn rejects_mixture_batches() {
        let b = SampleBatch::from_rows(BatchKind::Mixture, 2, vec![3.0, 4.0]).unwrap();
        assert!(empirical_copula(&b, &[0.5, 0.5]).is_err());
    }
}
