use serde::{Deserialize, Serialize};

use super::checks::{check_gamma_class, sv_inverse_unchecked, GammaReport, SvInverseReport};
use super::estimators::{estimate_rv_index, RvIndexEstimate, Trend};
use super::{auxiliary_grid, default_shifts, default_sv_lambdas, default_t_grid, LIMIT_TOLERANCE};
use crate::generators::{Generator, PowerScale, Regime};
use crate::scalar::{geometric_grid, Real};

/// Smallest and largest index accepted as regular variation.
pub const RV_INDEX_RANGE: (f64, f64) = (1e-3, 1e3);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence<T> {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rv_index: Option<RvIndexEstimate<T>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sv_inverse: Option<SvInverseReport<T>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<GammaReport<T>>,
    /// Power law fitted to the hazard scale at the end of the gamma grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hazard_fit: Option<PowerScale<T>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification<T> {
    /// `None` when the evidence is inconclusive.
    pub regime: Option<Regime<T>>,
    pub evidence: Evidence<T>,
}

impl<T: Real> Classification<T> {
    pub fn label(&self) -> &'static str {
        self.regime.as_ref().map_or("Inconclusive", Regime::label)
    }
}

/// Numeric regime classification from the generator alone.
///
/// A settled variation index in the accepted range gives regular variation; a
/// vanishing index confirmed by the inverse check gives slow variation; a
/// diverging index confirmed by the gamma-class check with the hazard scale
/// gives rapid variation.
pub fn classify_regime_numeric<T: Real>(g: &Generator<T>) -> Classification<T> {
    let mut ev = Evidence {
        rv_index: None,
        sv_inverse: None,
        gamma: None,
        hazard_fit: None,
        notes: Vec::new(),
    };
    let tol = T::lit(LIMIT_TOLERANCE);
    // slow variation needs a longer grid to show the index vanishing
    let rv = match estimate_rv_index(g, &geometric_grid(T::one(), T::lit(1e12), 13), tol) {
        Ok(rv) => rv,
        Err(e) => {
            ev.notes.push(format!("variation index: {e}"));
            return Classification {
                regime: None,
                evidence: ev,
            };
        }
    };
    let trend = rv.trend;
    let est = rv.estimate.clone();
    ev.rv_index = Some(rv);
    let (lo, hi) = (T::lit(RV_INDEX_RANGE.0), T::lit(RV_INDEX_RANGE.1));
    let regime = match trend {
        Trend::Finite if est.converged && est.value >= lo && est.value <= hi => {
            Some(Regime::RegularlyVarying { index: est.value })
        }
        Trend::Finite => {
            ev.notes.push("variation index did not settle".into());
            None
        }
        Trend::Vanishing => {
            let u_grid = geometric_grid(T::lit(0.5), T::lit(1e-3), 10);
            match sv_inverse_unchecked(g, &default_sv_lambdas(), &u_grid) {
                Ok(r) => {
                    let pass = r.pass;
                    ev.sv_inverse = Some(r);
                    pass.then_some(Regime::SlowlyVarying)
                }
                Err(e) => {
                    ev.notes.push(format!("inverse check: {e}"));
                    None
                }
            }
        }
        Trend::Diverging => rapid(g, &mut ev, tol),
    };
    Classification {
        regime,
        evidence: ev,
    }
}

fn rapid<T: Real>(g: &Generator<T>, ev: &mut Evidence<T>, tol: T) -> Option<Regime<T>> {
    let hazard = |t: T| g.hazard_scale(t).unwrap_or(T::nan());
    if let Some(bad) = default_t_grid::<T>()
        .into_iter()
        .find(|t| !(hazard(*t) > T::zero()))
    {
        ev.notes
            .push(format!("hazard scale unavailable at t = {bad}"));
        return None;
    }
    let grid = auxiliary_grid(&hazard);
    let report = match check_gamma_class(g, T::one(), &hazard, &grid, &default_shifts(), tol) {
        Ok(r) => r,
        Err(e) => {
            ev.notes.push(format!("gamma check: {e}"));
            return None;
        }
    };
    let pass = report.pass;
    ev.gamma = Some(report);
    let n = grid.len();
    let (t0, t1) = (grid[n - 2], grid[n - 1]);
    let (h0, h1) = (hazard(t0), hazard(t1));
    let mut exponent = (h1 / h0).ln() / (t1 / t0).ln();
    if exponent.abs() < T::lit(1e-6) {
        exponent = T::zero();
    }
    let fit = PowerScale::power(h1 / t1.powf(exponent), exponent);
    ev.hazard_fit = Some(fit);
    if !pass {
        ev.notes
            .push("gamma-class check with the hazard scale failed".into());
        return None;
    }
    Some(Regime::RapidlyVarying {
        gamma_index: T::one(),
        scale: fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::CustomGenerator;

    #[test]
    fn agrees_with_declared_regimes() {
        for s in [
            "clayton:theta=2",
            "clayton:theta=4",
            "clayton:theta=0.2",
            "gumbel:theta=1",
            "gumbel:theta=2",
            "gumbel:theta=4",
            "frank:theta=1",
            "frank:theta=2",
            "frank:theta=20",
            "joeb5:theta=1.5",
            "joeb5:theta=5",
            "negbin:theta=0.3,alpha=1",
            "negbin:theta=0.8,alpha=3",
            "logsv",
        ] {
            let g: Generator<f64> = s.parse().unwrap();
            let c = classify_regime_numeric(&g);
            let declared = g.declared_regime().unwrap();
            let found = c
                .regime
                .unwrap_or_else(|| panic!("{s}: inconclusive {:?}", c.evidence));
            assert!(
                found.is_equivalent(&declared, 1e-2),
                "{s}: {found:?} vs {declared:?}"
            );
        }
    }

    #[test]
    fn clayton_index_value() {
        let g = Generator::<f64>::clayton(2.0).unwrap();
        match classify_regime_numeric(&g).regime {
            Some(Regime::RegularlyVarying { index }) => assert!((index - 0.5).abs() < 1e-3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn frank_hazard_is_unit() {
        let g = Generator::<f64>::frank(2.0).unwrap();
        match classify_regime_numeric(&g).regime {
            Some(Regime::RapidlyVarying { gamma_index, scale }) => {
                assert!((gamma_index - 1.0).abs() < 1e-12);
                assert!((scale.coefficient - 1.0).abs() < 1e-3 && scale.exponent == 0.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn custom_without_derivatives_degrades_gracefully() {
        let g = Generator::custom(CustomGenerator::new("exp", |t: f64| (-t).exp()));
        let c = classify_regime_numeric(&g);
        assert!(c.evidence.rv_index.is_some());
        assert_eq!(c.label(), c.regime.map_or("Inconclusive", |r| r.label()));
    }
}
