mod check;
mod classify;
mod eval;
pub mod grid;
mod sample;
mod tail;

use copula_tail::tail_numeric::LimitEstimate;
use copula_tail::{Error, Generator64};
use serde::Serialize;
use serde_json::Value;

use crate::args::{Cli, Command, OutputFormat};
use crate::format::human;
use crate::grids::Env;
use crate::report::{Invocation, ReportDocument};
use crate::CliError;

/// Result of one command before rendering.
pub struct Output {
    pub doc: ReportDocument,
    /// Human summary lines; verdicts are appended when rendering.
    pub lines: Vec<String>,
    /// Replaces the human summary entirely (grid CSV on stdout).
    pub raw: Option<String>,
    /// Estimates that did not converge, for `--strict`.
    pub unconverged: Vec<String>,
}

impl Output {
    pub fn new(doc: ReportDocument) -> Self {
        Output {
            doc,
            lines: Vec::new(),
            raw: None,
            unconverged: Vec::new(),
        }
    }

    pub fn line(&mut self, label: &str, text: impl AsRef<str>) {
        self.lines.push(format!("{label:<22} {}", text.as_ref()));
    }

    /// Records a non-converged estimate so `--strict` can fail the run.
    pub fn track<T: Copy + Into<f64>>(&mut self, what: &str, est: &LimitEstimate<T>) {
        if !est.converged {
            let r: f64 = est.residual.into();
            let tol: f64 = est.tolerance.into();
            self.unconverged.push(format!(
                "{what} did not converge (residual {} > {})",
                human(r),
                human(tol)
            ));
            self.doc
                .warnings
                .push(format!("{what}: not converged, residual {}", human(r)));
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                let mut s = self.doc.to_json();
                s.push('\n');
                s
            }
            OutputFormat::Human => {
                if let Some(raw) = &self.raw {
                    return raw.clone();
                }
                let mut s = String::new();
                for l in &self.lines {
                    s.push_str(l);
                    s.push('\n');
                }
                for w in &self.doc.warnings {
                    s.push_str(&format!("warning: {w}\n"));
                }
                for v in &self.doc.verdicts {
                    let tol = v
                        .tolerance
                        .map(|t| format!(" (tol {})", human(t)))
                        .unwrap_or_default();
                    s.push_str(&format!(
                        "{:<7} {:<26} {}{tol}\n",
                        v.status.to_string(),
                        v.name,
                        v.detail
                    ));
                }
                s
            }
        }
    }
}

pub fn execute(cli: &Cli, env: &Env, invocation: Invocation) -> Result<Output, CliError> {
    match &cli.command {
        Command::Eval(a) => eval::run(a, invocation),
        Command::Tail(a) => tail::run(a, env, invocation),
        Command::Classify(a) => classify::run(a, invocation),
        Command::Check(a) => check::run(a, env, invocation),
        Command::Sample(a) => sample::run_sample(a, invocation),
        Command::Empirical(a) => sample::run_empirical(a, invocation),
        Command::Grid(a) => grid::run(a, env, invocation),
    }
}

pub fn parse_family(spec: &str) -> Result<Generator64, CliError> {
    Generator64::parse(spec).map_err(|e| match e {
        Error::Parse { .. } | Error::InvalidParameter { .. } => {
            CliError::usage(format!("family spec `{spec}`: {e}"))
        }
        other => other.into(),
    })
}

pub fn to_value<S: Serialize>(x: &S) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// `value [method, residual r]` with a marker when not converged.
pub fn describe<T: Copy + Into<f64>>(est: &LimitEstimate<T>) -> String {
    let v: f64 = est.value.into();
    let r: f64 = est.residual.into();
    let flag = if est.converged { "" } else { ", NOT CONVERGED" };
    format!(
        "{}  [{}, residual {}{flag}]",
        human(v),
        method_name(&est.method),
        human(r)
    )
}

pub fn method_name<S: Serialize>(m: &S) -> String {
    match to_value(m) {
        Value::String(s) => s,
        other => other.to_string(),
    }
}

pub fn list(xs: &[f64]) -> String {
    xs.iter().map(|x| human(*x)).collect::<Vec<_>>().join(",")
}

pub fn weights(w: Option<&Vec<f64>>, d: usize, flag: &str) -> Result<Vec<f64>, CliError> {
    match w {
        None => Ok(vec![1.0; d]),
        Some(w) if w.len() == d => Ok(w.clone()),
        Some(w) => Err(CliError::usage(format!(
            "{flag} has {} entries but the dimension is {d}",
            w.len()
        ))),
    }
}

pub fn positive(name: &str, x: f64) -> Result<f64, CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::usage(format!(
            "{name} must be positive and finite, got {x}"
        )))
    }
}

pub fn relative_gap(estimate: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        estimate.abs()
    } else {
        (estimate / reference - 1.0).abs()
    }
}
