use copula_tail::{copula_cdf, log_copula_cdf, UnitVector};
use serde_json::json;

use super::{list, parse_family, to_value, Output};
use crate::args::EvalArgs;
use crate::format::human;
use crate::report::{Invocation, Quantity, ReportDocument, Status, Verdict};
use crate::CliError;

const BOUNDS_SLACK: f64 = 1e-12;

pub fn run(a: &EvalArgs, invocation: Invocation) -> Result<Output, CliError> {
    let g = parse_family(&a.family)?;
    let u = UnitVector::new(a.u.clone())?;
    let d = u.dim();
    let c = copula_cdf(&g, &u)?;
    let logs: Vec<f64> = a.u.iter().map(|x| x.ln()).collect();
    let log_c = log_copula_cdf(&g, &logs)?;

    let mut doc = ReportDocument::new("eval", invocation);
    doc.family = Some(g.to_string());
    doc.dimension = Some(d);
    doc.numeric = Some(json!({
        "u": a.u,
        "cdf": to_value(&Quantity::with_method(c, "log-domain-composition", 0.0)),
        "log_cdf": to_value(&Quantity::with_method(log_c, "log-domain-composition", 0.0)),
    }));
    let lower = (a.u.iter().sum::<f64>() - (d as f64 - 1.0)).max(0.0);
    let upper = a.u.iter().copied().fold(1.0, f64::min);
    let inside = c >= lower - BOUNDS_SLACK && c <= upper + BOUNDS_SLACK;
    doc.verdicts.push(Verdict::new(
        "frechet_bounds",
        Status::from_bool(inside),
        Some(BOUNDS_SLACK),
        format!("{} <= C(u) <= {}", human(lower), human(upper)),
    ));

    let mut out = Output::new(doc);
    out.line("family", g.to_string());
    out.line("u", list(&a.u));
    out.line("C(u)", human(c));
    out.line("log C(u)", human(log_c));
    Ok(out)
}
