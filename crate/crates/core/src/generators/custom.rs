use std::fmt;
use std::sync::Arc;

use super::derivatives::{hermite, MAX_ANALYTIC_ORDER};
use super::regime::Regime;
use crate::scalar::Real;

pub type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;
pub type DerivativeFn<T> = Arc<dyn Fn(T, usize) -> T + Send + Sync>;

/// User-registered generator. Only `phi` is mandatory; a missing inverse is
/// replaced by bracketed root finding and missing derivatives by divided
/// differences.
#[derive(Clone)]
pub struct CustomGenerator<T> {
    pub(crate) name: String,
    pub(crate) psi: ScalarFn<T>,
    pub(crate) inverse: Option<ScalarFn<T>>,
    pub(crate) derivative: Option<(DerivativeFn<T>, usize)>,
    pub(crate) regime: Option<Regime<T>>,
}

impl<T: Real> CustomGenerator<T> {
    pub fn new(name: impl Into<String>, psi: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        CustomGenerator {
            name: name.into(),
            psi: Arc::new(psi),
            inverse: None,
            derivative: None,
            regime: None,
        }
    }

    pub fn with_inverse(mut self, inverse: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.inverse = Some(Arc::new(inverse));
        self
    }

    /// Analytic derivatives `f(t, n)` valid for `n <= max_order`.
    pub fn with_derivative(
        mut self,
        derivative: impl Fn(T, usize) -> T + Send + Sync + 'static,
        max_order: usize,
    ) -> Self {
        self.derivative = Some((Arc::new(derivative), max_order));
        self
    }

    pub fn with_regime(mut self, regime: Regime<T>) -> Self {
        self.regime = Some(regime);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `phi(t) = exp(-t^2)`: decreasing from 1 to 0 but not completely
    /// monotone (`phi''(0) = -2`). Registered as `testfn:exp-t2`.
    pub fn exp_neg_square() -> Self {
        CustomGenerator::new("testfn:exp-t2", |t: T| (-t * t).exp())
            .with_inverse(|u: T| (-u.ln()).sqrt())
            .with_derivative(
                |t: T, n: usize| {
                    let sign = if n.is_multiple_of(2) {
                        T::one()
                    } else {
                        -T::one()
                    };
                    sign * hermite(n, t) * (-t * t).exp()
                },
                MAX_ANALYTIC_ORDER,
            )
    }
}

impl<T> fmt::Debug for CustomGenerator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomGenerator")
            .field("name", &self.name)
            .field("inverse", &self.inverse.is_some())
            .field("derivative", &self.derivative.as_ref().map(|d| d.1))
            .finish()
    }
}
