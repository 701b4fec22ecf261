use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Auxiliary scale of the form `g(t) = coefficient * t^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerScale<T> {
    pub coefficient: T,
    pub exponent: T,
}

impl<T: Real> PowerScale<T> {
    pub fn constant(c: T) -> Self {
        PowerScale {
            coefficient: c,
            exponent: T::zero(),
        }
    }

    pub fn power(coefficient: T, exponent: T) -> Self {
        PowerScale {
            coefficient,
            exponent,
        }
    }

    pub fn eval(&self, t: T) -> T {
        if self.exponent == T::zero() {
            self.coefficient
        } else {
            self.coefficient * t.powf(self.exponent)
        }
    }

    pub fn describe(&self) -> String {
        let c = self.coefficient;
        if self.exponent == T::zero() {
            format!("{c}")
        } else if c == T::one() {
            format!("t^{}", self.exponent)
        } else {
            format!("{c}*t^{}", self.exponent)
        }
    }
}

/// Right-tail class of a Laplace transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum Regime<T> {
    /// `phi(tx)/phi(t) -> 1`.
    SlowlyVarying,
    /// `phi(tx)/phi(t) -> x^{-index}`.
    RegularlyVarying { index: T },
    /// `phi(t + x g(t))/phi(t) -> exp(-gamma_index * x)` with `g = scale`.
    RapidlyVarying {
        gamma_index: T,
        scale: PowerScale<T>,
    },
}

impl<T: Real> Regime<T> {
    pub fn regularly_varying(index: T) -> Result<Self> {
        if !(index > T::zero()) || !index.is_finite() {
            return Err(Error::domain(format!(
                "regular-variation index must be positive, got {index}"
            )));
        }
        Ok(Regime::RegularlyVarying { index })
    }

    pub fn rapidly_varying(gamma_index: T, scale: PowerScale<T>) -> Result<Self> {
        if !(gamma_index > T::zero()) || !gamma_index.is_finite() {
            return Err(Error::domain(format!(
                "gamma-class index must be positive, got {gamma_index}"
            )));
        }
        if !(scale.coefficient > T::zero()) {
            return Err(Error::domain("auxiliary scale must be positive"));
        }
        Ok(Regime::RapidlyVarying { gamma_index, scale })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Regime::SlowlyVarying => "SlowlyVarying",
            Regime::RegularlyVarying { .. } => "RegularlyVarying",
            Regime::RapidlyVarying { .. } => "RapidlyVarying",
        }
    }

    /// Whether two descriptions denote the same tail class.
    ///
    /// Gamma-class descriptions `(a, g)` and `(a', g')` match when
    /// `g/a ~ g'/a'`, since rescaling `g` rescales the index by the same factor.
    pub fn is_equivalent(&self, other: &Regime<T>, rel_tol: T) -> bool {
        let close = |a: T, b: T| {
            (a - b).abs() <= rel_tol * a.abs().max(b.abs()).max(T::min_positive_value())
        };
        match (self, other) {
            (Regime::SlowlyVarying, Regime::SlowlyVarying) => true,
            (Regime::RegularlyVarying { index: a }, Regime::RegularlyVarying { index: b }) => {
                close(*a, *b)
            }
            (
                Regime::RapidlyVarying {
                    gamma_index: a,
                    scale: g,
                },
                Regime::RapidlyVarying {
                    gamma_index: b,
                    scale: h,
                },
            ) => {
                (g.exponent - h.exponent).abs() <= rel_tol
                    && close(g.coefficient / *a, h.coefficient / *b)
            }
            _ => false,
        }
    }
}
