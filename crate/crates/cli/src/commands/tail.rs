use copula_tail::scalar::geometric_grid;
use copula_tail::tail_numeric::{
    estimate_tail_dependence, estimate_tail_order, estimate_tau, estimate_upper_exponent,
    LimitEstimate, TauOutcome,
};
use copula_tail::{theoretical_profile, Error, Generator64, Regime, TailProfile, WeightVector};
use serde_json::{json, Map, Value};

use super::{describe, list, parse_family, positive, relative_gap, to_value, weights, Output};
use crate::args::TailArgs;
use crate::format::human;
use crate::grids::{t_grid, u_grid, Env};
use crate::report::{Invocation, Quantity, ReportDocument, Status, Verdict};
use crate::CliError;

const DEFAULT_AGREEMENT: f64 = 1e-3;
const SV_AGREEMENT: f64 = 1e-2;
/// Tolerance of the numeric `tau` behind derived (d > 2) profiles.
const DERIVED_TAU_TOLERANCE: f64 = 1e-9;

struct Theory {
    profile: TailProfile<f64>,
    tau: Option<Quantity>,
    lower_tail: f64,
    normalized: f64,
    upper_exponent: f64,
}

fn theory(g: &Generator64, d: usize, w: &[f64]) -> Result<Result<Theory, String>, CliError> {
    let profile = match theoretical_profile(g, d) {
        Ok(p) => p,
        Err(Error::Capability(msg)) => return Ok(Err(msg)),
        Err(e) => return Err(e.into()),
    };
    let tau = match profile.tau() {
        None => None,
        Some(t) if !profile.derived => Some(Quantity::closed_form(t)),
        Some(t) => {
            let grid = geometric_grid(1.0, 100.0, 9);
            let residual =
                match estimate_tau(g, profile.tail_order, d, &grid, DERIVED_TAU_TOLERANCE)? {
                    TauOutcome::Finite(e) => e.residual,
                    TauOutcome::NoFiniteTau { .. } => f64::NAN,
                };
            Some(Quantity::with_method(t, "derived-ratio-limit", residual))
        }
    };
    let lower_tail = profile.lower_tail(w)?;
    let normalized = lower_tail / profile.lower_tail(&vec![1.0; d])?;
    let upper_exponent = profile.upper_exponent(w)?;
    Ok(Ok(Theory {
        profile,
        tau,
        lower_tail,
        normalized,
        upper_exponent,
    }))
}

/// Numeric estimates; each is either a limit or the error that stopped it.
struct Numeric {
    k_used: f64,
    k_source: &'static str,
    tail_order: Result<LimitEstimate<f64>, String>,
    tau: Result<TauOutcome<f64>, String>,
    lower_tail: Result<LimitEstimate<f64>, String>,
    normalized: Result<LimitEstimate<f64>, String>,
    upper_exponent: Result<LimitEstimate<f64>, String>,
}

fn estimate_value(r: &Result<LimitEstimate<f64>, String>) -> Value {
    match r {
        Ok(e) => to_value(e),
        Err(msg) => json!({"status": "ERROR", "message": msg}),
    }
}

pub fn run(a: &TailArgs, env: &Env, invocation: Invocation) -> Result<Output, CliError> {
    let g = parse_family(&a.family)?;
    let d = a.d;
    let w = weights(a.w.as_ref(), d, "--w")?;
    let wv = WeightVector::new(w.clone())?;
    if !wv.is_positive() {
        return Err(CliError::usage("--w entries must be strictly positive"));
    }
    let tol = positive("--tol", a.tol)?;
    let tau_tol = positive("--tau-tol", a.tau_tol)?;
    let sv = matches!(g.declared_regime(), Some(Regime::SlowlyVarying));
    let agree = positive(
        "--agree-tol",
        a.agree_tol
            .unwrap_or(if sv { SV_AGREEMENT } else { DEFAULT_AGREEMENT }),
    )?;
    let (want_theory, want_numeric) = if a.theory || a.estimate {
        (a.theory, a.estimate)
    } else {
        (true, true)
    };

    let mut doc = ReportDocument::new("tail", invocation);
    doc.family = Some(g.to_string());
    doc.dimension = Some(d);
    let mut lines = Vec::new();
    lines.push(("family", format!("{g}  (d = {d}, w = {})", list(&w))));

    let th = if want_theory {
        theory(&g, d, &w)?
    } else {
        Err("not requested (--estimate only)".to_string())
    };
    doc.theory = Some(match &th {
        Ok(t) => {
            lines.push((
                "theory k",
                format!("{}  [closed-form]", human(t.profile.tail_order)),
            ));
            if let Some(q) = &t.tau {
                lines.push(("theory tau", format!("{}  [{}]", human(q.value), q.method)));
            }
            lines.push(("theory b(w)", human(t.lower_tail)));
            lines.push(("theory b(w)/b(1)", human(t.normalized)));
            lines.push(("theory a(w)", human(t.upper_exponent)));
            let mut block = json!({
                "status": "COMPUTED",
                "profile": to_value(&t.profile),
                "regime": t.profile.regime.label(),
                "tail_order": to_value(&Quantity::closed_form(t.profile.tail_order)),
                "tau": t.tau.as_ref().map(to_value),
                "lower_tail": to_value(&Quantity::closed_form(t.lower_tail)),
                "normalized_lower_tail": to_value(&Quantity::closed_form(t.normalized)),
                "upper_exponent": to_value(&Quantity::closed_form(t.upper_exponent)),
            });
            if t.tau.is_none() {
                block.as_object_mut().unwrap().remove("tau");
            }
            block
        }
        Err(reason) => {
            lines.push(("theory", format!("SKIPPED ({reason})")));
            json!({"status": "SKIPPED", "reason": reason})
        }
    });

    let mut out = Output::new(doc);
    let num = if want_numeric {
        let ug = u_grid(&g, a.grids.u_min, env)?;
        let tg = t_grid(a.grids.t_max, env)?;
        let tail_order = estimate_tail_order(&g, d, &ug, tol).map_err(|e| e.to_string());
        let (k_used, k_source) = match (&th, &tail_order) {
            (Ok(t), _) => (t.profile.tail_order, "theory"),
            (Err(_), Ok(k)) => (k.value, "estimate"),
            (Err(_), Err(_)) => (1.0, "fallback"),
        };
        let tau = estimate_tau(&g, k_used, d, &tg, tau_tol).map_err(|e| e.to_string());
        let lower_tail =
            estimate_tail_dependence(&g, &wv, k_used, &ug, false, tol).map_err(|e| e.to_string());
        let normalized =
            estimate_tail_dependence(&g, &wv, k_used, &ug, true, tol).map_err(|e| e.to_string());
        let upper_exponent = estimate_upper_exponent(&g, &wv, &ug, tol).map_err(|e| e.to_string());
        let mut block = Map::new();
        block.insert("u_grid".into(), json!(ug));
        block.insert("t_grid".into(), json!(tg));
        block.insert(
            "k_used".into(),
            json!({"value": k_used, "source": k_source}),
        );
        block.insert("tail_order".into(), estimate_value(&tail_order));
        block.insert(
            "tau".into(),
            match &tau {
                Ok(t) => to_value(t),
                Err(msg) => json!({"status": "ERROR", "message": msg}),
            },
        );
        block.insert("lower_tail".into(), estimate_value(&lower_tail));
        block.insert("normalized_lower_tail".into(), estimate_value(&normalized));
        block.insert("upper_exponent".into(), estimate_value(&upper_exponent));
        out.doc.numeric = Some(Value::Object(block));
        Some(Numeric {
            k_used,
            k_source,
            tail_order,
            tau,
            lower_tail,
            normalized,
            upper_exponent,
        })
    } else {
        out.doc.numeric =
            Some(json!({"status": "SKIPPED", "reason": "not requested (--theory only)"}));
        None
    };

    for (label, text) in lines {
        out.line(label, text);
    }
    if let Some(n) = &num {
        let show = |out: &mut Output, label: &str, r: &Result<LimitEstimate<f64>, String>| match r {
            Ok(e) => {
                out.line(label, describe(e));
                out.track(label, e);
            }
            Err(msg) => out.line(label, format!("ERROR {msg}")),
        };
        show(&mut out, "numeric k", &n.tail_order);
        out.line("k used", format!("{} ({})", human(n.k_used), n.k_source));
        match &n.tau {
            Ok(TauOutcome::Finite(e)) => {
                out.line("numeric tau", describe(e));
                out.track("numeric tau", e);
            }
            Ok(TauOutcome::NoFiniteTau { direction, .. }) => out.line(
                "numeric tau",
                format!(
                    "no finite limit (ratio diverges {})",
                    super::method_name(direction)
                ),
            ),
            Err(msg) => out.line("numeric tau", format!("ERROR {msg}")),
        }
        show(&mut out, "numeric b(w)", &n.lower_tail);
        show(&mut out, "numeric b(w)/b(1)", &n.normalized);
        show(&mut out, "numeric a(w)", &n.upper_exponent);
    }

    out.doc.verdicts = verdicts(&th, num.as_ref(), agree);
    Ok(out)
}

fn compare(
    name: &str,
    reference: Option<f64>,
    estimate: Option<&Result<LimitEstimate<f64>, String>>,
    agree: f64,
    absolute: bool,
) -> Verdict {
    let Some(reference) = reference else {
        return Verdict::skipped(name, "no theory value");
    };
    let Some(estimate) = estimate else {
        return Verdict::skipped(name, "no numeric estimate");
    };
    match estimate {
        Err(msg) => Verdict::new(
            name,
            Status::Fail,
            Some(agree),
            format!("estimate failed: {msg}"),
        ),
        Ok(e) => {
            let (gap, kind) = if absolute {
                ((e.value - reference).abs(), "absolute")
            } else {
                (relative_gap(e.value, reference), "relative")
            };
            Verdict::new(
                name,
                Status::from_bool(gap <= agree),
                Some(agree),
                format!(
                    "theory {} vs numeric {} ({kind} gap {})",
                    human(reference),
                    human(e.value),
                    human(gap)
                ),
            )
        }
    }
}

fn verdicts(th: &Result<Theory, String>, num: Option<&Numeric>, agree: f64) -> Vec<Verdict> {
    let t = th.as_ref().ok();
    let mut v = Vec::new();
    v.push(compare(
        "tail_order",
        t.map(|t| t.profile.tail_order),
        num.map(|n| &n.tail_order),
        agree,
        true,
    ));
    let tau_ref = t.and_then(|t| t.tau.as_ref().map(|q| q.value));
    v.push(match (t, tau_ref, num) {
        (None, _, _) => Verdict::skipped("tau", "no theory value"),
        (Some(_), None, _) => Verdict::skipped("tau", "regime carries no tau constant"),
        (_, _, None) => Verdict::skipped("tau", "no numeric estimate"),
        (_, Some(tau), Some(n)) => match &n.tau {
            Ok(TauOutcome::Finite(e)) => {
                compare("tau", Some(tau), Some(&Ok(e.clone())), agree, false)
            }
            Ok(TauOutcome::NoFiniteTau { direction, .. }) => Verdict::new(
                "tau",
                Status::Fail,
                Some(agree),
                format!("ratio diverges {}", super::method_name(direction)),
            ),
            Err(msg) => Verdict::new(
                "tau",
                Status::Fail,
                Some(agree),
                format!("estimate failed: {msg}"),
            ),
        },
    });
    v.push(compare(
        "lower_tail",
        t.map(|t| t.lower_tail),
        num.map(|n| &n.lower_tail),
        agree,
        false,
    ));
    v.push(compare(
        "normalized_lower_tail",
        t.map(|t| t.normalized),
        num.map(|n| &n.normalized),
        agree,
        false,
    ));
    v.push(compare(
        "upper_exponent",
        t.map(|t| t.upper_exponent),
        num.map(|n| &n.upper_exponent),
        agree,
        false,
    ));
    v
}
