use copula_tail::tail_numeric::classify_regime_numeric;
use copula_tail::Regime;
use serde_json::json;

use super::{describe, parse_family, to_value, Output};
use crate::args::FamilyArg;
use crate::format::human;
use crate::report::{Invocation, ReportDocument, Status, Verdict};
use crate::CliError;

const EQUIVALENCE_TOLERANCE: f64 = 1e-2;

fn summary(r: &Regime<f64>) -> String {
    match r {
        Regime::SlowlyVarying => "SlowlyVarying".into(),
        Regime::RegularlyVarying { index } => {
            format!("RegularlyVarying (alpha = {})", human(*index))
        }
        Regime::RapidlyVarying { gamma_index, scale } => format!(
            "RapidlyVarying (gamma index {}, scale g(t) = {})",
            human(*gamma_index),
            scale.describe()
        ),
    }
}

pub fn run(a: &FamilyArg, invocation: Invocation) -> Result<Output, CliError> {
    let g = parse_family(&a.family)?;
    let c = classify_regime_numeric(&g);
    let declared = g.declared_regime();

    let mut doc = ReportDocument::new("classify", invocation);
    doc.family = Some(g.to_string());
    doc.theory = Some(match &declared {
        Some(r) => {
            json!({"status": "COMPUTED", "declared_regime": to_value(r), "label": r.label()})
        }
        None => json!({"status": "SKIPPED", "reason": format!("{} declares no regime", g.name())}),
    });
    doc.numeric = Some(json!({
        "label": c.label(),
        "classification": to_value(&c),
    }));
    doc.verdicts.push(match (&declared, &c.regime) {
        (None, _) => Verdict::skipped("declared_regime", "no declared regime to compare"),
        (Some(d), None) => Verdict::new(
            "declared_regime",
            Status::Fail,
            Some(EQUIVALENCE_TOLERANCE),
            format!("declared {}, numeric evidence inconclusive", d.label()),
        ),
        (Some(d), Some(found)) => Verdict::new(
            "declared_regime",
            Status::from_bool(found.is_equivalent(d, EQUIVALENCE_TOLERANCE)),
            Some(EQUIVALENCE_TOLERANCE),
            format!("declared {}, found {}", summary(d), summary(found)),
        ),
    });

    let mut out = Output::new(doc);
    out.line("family", g.to_string());
    out.line(
        "regime",
        c.regime
            .as_ref()
            .map_or_else(|| "Inconclusive".to_string(), summary),
    );
    if let Some(rv) = &c.evidence.rv_index {
        out.line("variation index", describe(&rv.estimate));
        out.line("index trend", super::method_name(&rv.trend));
    }
    if let Some(sv) = &c.evidence.sv_inverse {
        out.line("inverse check", if sv.pass { "pass" } else { "fail" });
    }
    if let Some(gm) = &c.evidence.gamma {
        out.line(
            "gamma check",
            format!(
                "deviation {} at t = {}",
                human(gm.final_deviation),
                human(gm.final_t)
            ),
        );
    }
    for n in &c.evidence.notes {
        out.line("note", n);
    }
    if c.regime.is_none() {
        out.unconverged.push("classification inconclusive".into());
    }
    Ok(out)
}
