//! Archimedean copula `C(u) = phi(sum_i phi^{-1}(u_i))` and its tail-side
//! companions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::scalar::{compensated_sum, log_sum_exp, Real};

/// Largest supported dimension.
pub const MAX_DIM: usize = 64;

fn check_dim(d: usize) -> Result<()> {
    if !(2..=MAX_DIM).contains(&d) {
        return Err(Error::domain(format!(
            "dimension must be in 2..={MAX_DIM}, got {d}"
        )));
    }
    Ok(())
}

/// A point of the unit cube, `d >= 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<T>", into = "Vec<T>", bound = "T: Real")]
pub struct UnitVector<T: Real> {
    values: Vec<T>,
}

impl<T: Real> UnitVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        check_dim(values.len())?;
        if let Some(bad) = values
            .iter()
            .find(|u| !(**u >= T::zero() && **u <= T::one()))
        {
            return Err(Error::domain(format!(
                "coordinates must lie in [0,1], got {bad}"
            )));
        }
        Ok(UnitVector { values })
    }

    /// `(u, ..., u)` of dimension `d`.
    pub fn diagonal(u: T, d: usize) -> Result<Self> {
        Self::new(vec![u; d])
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

impl<T: Real> TryFrom<Vec<T>> for UnitVector<T> {
    type Error = Error;
    fn try_from(v: Vec<T>) -> Result<Self> {
        Self::new(v)
    }
}

impl<T: Real> From<UnitVector<T>> for Vec<T> {
    fn from(u: UnitVector<T>) -> Self {
        u.values
    }
}

/// Nonnegative direction vector `w` for tail functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<T>", into = "Vec<T>", bound = "T: Real")]
pub struct WeightVector<T: Real> {
    values: Vec<T>,
}

impl<T: Real> WeightVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        check_dim(values.len())?;
        if let Some(bad) = values
            .iter()
            .find(|w| !(**w >= T::zero()) || !w.is_finite())
        {
            return Err(Error::domain(format!(
                "weights must be finite and >= 0, got {bad}"
            )));
        }
        Ok(WeightVector { values })
    }

    pub fn ones(d: usize) -> Result<Self> {
        Self::new(vec![T::one(); d])
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn min(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max(&self) -> T {
        self.values.iter().copied().fold(T::zero(), T::max)
    }

    pub fn is_positive(&self) -> bool {
        self.values.iter().all(|w| *w > T::zero())
    }

    pub fn scaled(&self, c: T) -> Result<Self> {
        Self::new(self.values.iter().map(|w| *w * c).collect())
    }
}

impl<T: Real> TryFrom<Vec<T>> for WeightVector<T> {
    type Error = Error;
    fn try_from(v: Vec<T>) -> Result<Self> {
        Self::new(v)
    }
}

impl<T: Real> From<WeightVector<T>> for Vec<T> {
    fn from(w: WeightVector<T>) -> Self {
        w.values
    }
}

/// `C(u)`. Zero if any coordinate is zero.
pub fn copula_cdf<T: Real>(g: &Generator<T>, u: &UnitVector<T>) -> Result<T> {
    if u.values.iter().any(|x| *x == T::zero()) {
        return Ok(T::zero());
    }
    let mut terms = Vec::with_capacity(u.dim());
    for &x in &u.values {
        terms.push(g.psi_inv_raw(x)?);
    }
    if terms.iter().all(|t| t.is_finite()) {
        let s = compensated_sum(terms.iter().copied());
        if s.is_finite() {
            return Ok(g.psi_raw(s));
        }
    }
    let logs: Vec<T> = u.values.iter().map(|x| x.ln()).collect();
    Ok(log_cdf_unchecked(g, &logs)?.exp())
}

/// `ln C(u)` from `ln u`, usable where `u` itself underflows.
pub fn log_copula_cdf<T: Real>(g: &Generator<T>, log_u: &[T]) -> Result<T> {
    check_dim(log_u.len())?;
    if let Some(bad) = log_u.iter().find(|l| l.is_nan() || **l > T::zero()) {
        return Err(Error::domain(format!(
            "log coordinates must be <= 0, got {bad}"
        )));
    }
    log_cdf_unchecked(g, log_u)
}

pub(crate) fn log_cdf_unchecked<T: Real>(g: &Generator<T>, log_u: &[T]) -> Result<T> {
    if log_u.iter().any(|l| *l == T::neg_infinity()) {
        return Ok(T::neg_infinity());
    }
    let active: Vec<T> = log_u.iter().copied().filter(|l| *l < T::zero()).collect();
    if active.is_empty() {
        return Ok(T::zero());
    }
    let mut terms = Vec::with_capacity(active.len());
    for &l in &active {
        terms.push(g.inv_from_log_raw(l)?);
    }
    if terms.iter().all(|t| t.is_finite()) {
        let s = compensated_sum(terms.iter().copied());
        if s.is_finite() {
            return Ok(g.log_psi_raw(s));
        }
    }
    let mut logs = Vec::with_capacity(active.len());
    for &l in &active {
        logs.push(g.log_inv_from_log_raw(l)?);
    }
    Ok(g.log_psi_at_log_raw(log_sum_exp(&logs)))
}

/// `P(U_i > 1 - u w_i for some i) = 1 - C(1 - u w_1, ..., 1 - u w_d)`,
/// evaluated through the complement forms of the generator.
pub fn upper_joint_exceed<T: Real>(g: &Generator<T>, u: T, w: &WeightVector<T>) -> Result<T> {
    if !(u > T::zero() && u < T::one()) {
        return Err(Error::domain(format!("scale u must lie in (0,1), got {u}")));
    }
    if !(u * w.max() < T::one()) {
        return Err(Error::domain("u * max(w) must be < 1"));
    }
    let mut terms = Vec::with_capacity(w.dim());
    for &wi in &w.values {
        terms.push(g.psi_inv_one_minus_raw(u * wi)?);
    }
    let s = compensated_sum(terms);
    Ok(g.one_minus_psi_raw(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn uv(v: &[f64]) -> UnitVector<f64> {
        UnitVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn vector_validation() {
        assert!(UnitVector::new(vec![0.5_f64]).is_err());
        assert!(UnitVector::new(vec![0.5_f64, 1.2]).is_err());
        assert!(UnitVector::new(vec![0.5_f64; 65]).is_err());
        assert!(WeightVector::new(vec![1.0_f64, -1.0]).is_err());
        assert!(WeightVector::new(vec![0.0_f64, 0.0]).is_ok());
    }

    #[test]
    fn point_values() {
        let g2 = Generator::gumbel(2.0).unwrap();
        let e1 = (-1.0f64).exp();
        let v = copula_cdf(&g2, &uv(&[e1, e1])).unwrap();
        assert!((v - (-2f64.sqrt()).exp()).abs() < 1e-15);
        let c1 = Generator::clayton(1.0).unwrap();
        let v = copula_cdf(&c1, &uv(&[0.5, 0.5])).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
        let sv = Generator::log_sv();
        let v = copula_cdf(&sv, &uv(&[0.1, 0.2])).unwrap();
        let e = std::f64::consts::E;
        let t = (10f64).exp() - e + (5f64).exp() - e;
        assert!((v - 1.0 / (t + e).ln()).abs() < 1e-15);
        assert!((v - 0.09994).abs() < 1e-5);
    }

    #[test]
    fn log_cdf_values() {
        let g2 = Generator::gumbel(2.0).unwrap();
        let lt = -37.5;
        let v = log_copula_cdf(&g2, &[lt, lt]).unwrap();
        assert!((v - 2f64.sqrt() * lt).abs() < 1e-12);
        assert_eq!(log_copula_cdf(&g2, &[0.0, 0.0]).unwrap(), 0.0);
        let c1 = Generator::<f64>::clayton(1.0).unwrap();
        // ln(1 / (2 e^20 - 1))
        let v = log_copula_cdf(&c1, &[-20.0, -20.0]).unwrap();
        assert!((v + 20.693147179529368).abs() < 1e-12);
        assert_eq!(
            log_copula_cdf(&c1, &[f64::NEG_INFINITY, -1.0]).unwrap(),
            f64::NEG_INFINITY
        );
        // deep tail where phi^{-1}(u) overflows
        let v = log_copula_cdf(&c1, &[-800.0, -800.0]).unwrap();
        assert!((v - (-800.0 - 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn upper_exceedance() {
        let g2 = Generator::<f64>::gumbel(2.0).unwrap();
        let z = WeightVector::new(vec![0.0, 0.0]).unwrap();
        assert_eq!(upper_joint_exceed(&g2, 0.1, &z).unwrap(), 0.0);
        let single = WeightVector::new(vec![1.0, 0.0]).unwrap();
        for g in [
            g2.clone(),
            Generator::frank(2.0).unwrap(),
            Generator::log_sv(),
        ] {
            let v = upper_joint_exceed(&g, 0.1, &single).unwrap();
            assert!((v - 0.1).abs() < 1e-14, "{g}: {v}");
        }
        let ones = WeightVector::ones(2).unwrap();
        let v = upper_joint_exceed(&g2, 1e-4, &ones).unwrap();
        assert!((v / 1e-4 / 2f64.sqrt() - 1.0).abs() < 1e-2);
        assert!(upper_joint_exceed(&g2, 0.6, &WeightVector::new(vec![2.0, 1.0]).unwrap()).is_err());
    }

    fn families() -> Vec<Generator<f64>> {
        vec![
            Generator::clayton(2.0).unwrap(),
            Generator::gumbel(3.0).unwrap(),
            Generator::frank(5.0).unwrap(),
            Generator::joe_b5(1.7).unwrap(),
            Generator::neg_binomial(0.4, 1.5).unwrap(),
            Generator::log_sv(),
        ]
    }

    #[test]
    fn uniform_margins() {
        for g in families() {
            for u in [1e-200, 1e-8, 0.3, 0.999] {
                let v = copula_cdf(&g, &uv(&[u, 1.0, 1.0])).unwrap();
                assert!(((v - u) / u).abs() < 1e-10, "{g} u={u} v={v}");
            }
        }
    }

    proptest! {
        #[test]
        fn exchangeable_and_within_frechet_bounds(
            fi in 0usize..6,
            u in proptest::collection::vec(0.0f64..=1.0, 2..5),
        ) {
            let g = &families()[fi];
            let c = copula_cdf(g, &uv(&u)).unwrap();
            let mut r = u.clone();
            r.reverse();
            let cr = copula_cdf(g, &uv(&r)).unwrap();
            prop_assert!((c - cr).abs() <= 1e-14);
            let lower = (u.iter().sum::<f64>() - (u.len() as f64) + 1.0).max(0.0);
            let upper = u.iter().copied().fold(1.0, f64::min);
            prop_assert!(c >= lower - 1e-14 && c <= upper + 1e-14, "{} {} {}", lower, c, upper);
        }

        #[test]
        fn log_cdf_consistent(fi in 0usize..6, e in proptest::collection::vec(-12.0f64..0.0, 2..4)) {
            let g = &families()[fi];
            let u: Vec<f64> = e.iter().map(|x| 10f64.powf(*x)).collect();
            let c = copula_cdf(g, &uv(&u)).unwrap();
            let lc = log_copula_cdf(g, &u.iter().map(|x| x.ln()).collect::<Vec<_>>()).unwrap();
            prop_assert!((lc.exp() - c).abs() <= 1e-9 * c);
        }
    }
}
