//! Default grids with endpoint overrides from flags or the environment.

use std::collections::BTreeMap;

use copula_tail::scalar::geometric_grid;
use copula_tail::tail_numeric::{default_t_grid, default_u_grid};
use copula_tail::Generator64;

use crate::CliError;

pub const UGRID_MIN_VAR: &str = "CTL_UGRID_MIN";
pub const TGRID_MAX_VAR: &str = "CTL_TGRID_MAX";

/// Environment variables the tool reads.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Env {
    vars: BTreeMap<String, String>,
}

impl Env {
    pub fn from_process() -> Self {
        Env::from_pairs(std::env::vars())
    }

    /// Keeps only the variables the tool understands.
    pub fn from_pairs<K: Into<String>, V: Into<String>>(
        pairs: impl IntoIterator<Item = (K, V)>,
    ) -> Self {
        let vars = pairs
            .into_iter()
            .map(|(k, v)| (k.into(), v.into()))
            .filter(|(k, _)| k == UGRID_MIN_VAR || k == TGRID_MAX_VAR)
            .collect();
        Env { vars }
    }

    pub fn vars(&self) -> &BTreeMap<String, String> {
        &self.vars
    }

    fn number(&self, name: &str) -> Result<Option<f64>, CliError> {
        match self.vars.get(name) {
            None => Ok(None),
            Some(raw) => {
                raw.trim().parse::<f64>().map(Some).map_err(|_| {
                    CliError::usage(format!("{name}: cannot parse `{raw}` as a number"))
                })
            }
        }
    }
}

/// Geometric grid from `start` with the same ratio as `template`, stretched or
/// shortened so that it ends at `end`.
fn regrid(template: &[f64], end: f64) -> Vec<f64> {
    let start = template[0];
    let ratio = template[1] / template[0];
    let steps = ((end / start).ln() / ratio.ln()).round().max(3.0) as usize;
    geometric_grid(start, end, steps + 1)
}

pub fn u_grid(g: &Generator64, flag: Option<f64>, env: &Env) -> Result<Vec<f64>, CliError> {
    let base = default_u_grid(g);
    let Some(end) = flag.or(env.number(UGRID_MIN_VAR)?) else {
        return Ok(base);
    };
    if !(end > 0.0 && end < base[0]) {
        return Err(CliError::usage(format!(
            "smallest u must lie in (0, {}), got {end}",
            base[0]
        )));
    }
    Ok(regrid(&base, end))
}

pub fn t_grid(flag: Option<f64>, env: &Env) -> Result<Vec<f64>, CliError> {
    let base = default_t_grid();
    let Some(end) = flag.or(env.number(TGRID_MAX_VAR)?) else {
        return Ok(base);
    };
    if !(end > base[0] && end.is_finite()) {
        return Err(CliError::usage(format!(
            "largest t must be finite and exceed {}, got {end}",
            base[0]
        )));
    }
    Ok(regrid(&base, end))
}
