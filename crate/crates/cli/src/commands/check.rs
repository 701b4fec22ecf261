use copula_tail::tail_numeric::{
    auxiliary_grid, check_complete_monotonicity, check_gamma_class, check_self_neglecting,
    check_sv_inverse_rapid, default_cm_grid, default_shifts, default_sv_lambdas,
};
use copula_tail::{Error, Generator64, PowerScale, Regime};
use serde_json::{json, Map, Value};

use super::{describe, parse_family, positive, to_value, Output};
use crate::args::CheckArgs;
use crate::format::human;
use crate::grids::{t_grid, u_grid, Env, TGRID_MAX_VAR};
use crate::report::{Invocation, ReportDocument, Status, Verdict};
use crate::CliError;

const DEFAULT_CM_ORDER: usize = 6;
const SCALE_LAMBDA: f64 = 2.0;
/// Fewest grid points with a usable scale before the scale checks run.
const MIN_SCALE_POINTS: usize = 4;

/// Auxiliary scale for the gamma-class and self-neglect checks.
enum Scale {
    Declared { index: f64, scale: PowerScale<f64> },
    Hazard,
    NotRapid(&'static str),
}

fn scale_for(g: &Generator64) -> Scale {
    match g.declared_regime() {
        Some(Regime::RapidlyVarying { gamma_index, scale }) => Scale::Declared {
            index: gamma_index,
            scale,
        },
        Some(r) => Scale::NotRapid(r.label()),
        None => Scale::Hazard,
    }
}

pub fn run(a: &CheckArgs, env: &Env, invocation: Invocation) -> Result<Output, CliError> {
    let g = parse_family(&a.family)?;
    let tol = positive("--tol", a.tol)?;
    let all = a.cm_order.is_none() && !a.gamma && !a.self_neglecting && !a.sv_inverse;
    let cm_order = a.cm_order.or(all.then_some(DEFAULT_CM_ORDER));

    let mut doc = ReportDocument::new("check", invocation);
    doc.family = Some(g.to_string());
    let mut out = Output::new(doc);
    out.line("family", g.to_string());
    let mut block = Map::new();
    let mut verdicts = Vec::new();

    if let Some(order) = cm_order {
        let r = check_complete_monotonicity(&g, order, &default_cm_grid())?;
        let detail = match r.violations.first() {
            None => format!("signs alternate up to order {}", r.max_order_checked),
            Some(v) => format!(
                "FAIL at order {}: derivative {} at t = {}",
                v.order,
                human(v.value),
                human(v.t)
            ),
        };
        out.line("complete monotonicity", &detail);
        if let Some(n) = &r.note {
            out.line("note", n);
        }
        verdicts.push(Verdict::new(
            "complete_monotonicity",
            Status::from_bool(r.pass),
            Some(r.tolerance),
            detail,
        ));
        block.insert("complete_monotonicity".into(), to_value(&r));
    }

    let scale = scale_for(&g);
    let hazard = |t: f64| g.hazard_scale(t).unwrap_or(f64::NAN);
    let declared_eval = |t: f64| match &scale {
        Scale::Declared { scale, .. } => scale.eval(t),
        _ => hazard(t),
    };
    let explicit_t = a.grids.t_max.is_some() || env.vars().contains_key(TGRID_MAX_VAR);
    let scale_label = match &scale {
        Scale::Declared { scale, .. } => format!("declared g(t) = {}", scale.describe()),
        Scale::Hazard => "hazard scale".to_string(),
        Scale::NotRapid(_) => String::new(),
    };
    // Err carries the reason both scale checks are skipped.
    let aux: Result<Vec<f64>, String> = if !(all || a.gamma || a.self_neglecting) {
        Err(String::new())
    } else {
        match &scale {
            Scale::NotRapid(label) => Err(format!("declared regime is {label}")),
            _ => {
                let grid = if explicit_t {
                    t_grid(a.grids.t_max, env)?
                } else {
                    auxiliary_grid(&declared_eval)
                };
                let usable: Vec<f64> = grid
                    .iter()
                    .copied()
                    .take_while(|t| declared_eval(*t) > 0.0 && declared_eval(*t).is_finite())
                    .collect();
                if usable.len() < MIN_SCALE_POINTS {
                    let at = grid.get(usable.len()).copied().unwrap_or(f64::NAN);
                    Err(format!("{scale_label} unavailable at t = {}", human(at)))
                } else {
                    Ok(usable)
                }
            }
        }
    };

    if all || a.gamma {
        match &aux {
            Err(reason) => {
                verdicts.push(Verdict::skipped("gamma_class", reason.clone()));
                block.insert(
                    "gamma_class".into(),
                    json!({"status": "SKIPPED", "reason": reason}),
                );
            }
            Ok(grid) => {
                let alpha = match &scale {
                    Scale::Declared { index, .. } => *index,
                    _ => 1.0,
                };
                let r = check_gamma_class(&g, alpha, &declared_eval, grid, &default_shifts(), tol)?;
                let detail = format!(
                    "alpha {}, {scale_label}: deviation {} at t = {}",
                    human(alpha),
                    human(r.final_deviation),
                    human(r.final_t)
                );
                out.line("gamma class", &detail);
                verdicts.push(Verdict::new(
                    "gamma_class",
                    Status::from_bool(r.pass),
                    Some(tol),
                    detail,
                ));
                block.insert("gamma_class".into(), to_value(&r));
            }
        }
    }

    if all || a.self_neglecting {
        match &aux {
            Err(reason) => {
                verdicts.push(Verdict::skipped("self_neglecting", reason.clone()));
                verdicts.push(Verdict::skipped("scale_ratio", reason.clone()));
                block.insert(
                    "self_neglecting".into(),
                    json!({"status": "SKIPPED", "reason": reason}),
                );
            }
            Ok(grid) => {
                let r = check_self_neglecting(
                    &declared_eval,
                    grid,
                    &default_shifts(),
                    &[SCALE_LAMBDA],
                    tol,
                )?;
                let detail = format!(
                    "{scale_label}: shift deviation {}, g(t)/t = {}",
                    human(r.shift_deviation),
                    human(r.relative_size)
                );
                out.line("self-neglect", &detail);
                verdicts.push(Verdict::new(
                    "self_neglecting",
                    Status::from_bool(r.pass),
                    Some(tol),
                    detail,
                ));
                let est = &r.scale_ratios[0].estimate;
                out.line("g(t)/g(2t)", describe(est));
                out.track("g(t)/g(2t)", est);
                verdicts.push(match &scale {
                    Scale::Declared { scale, .. } => {
                        let expected = SCALE_LAMBDA.powf(-scale.exponent);
                        let gap = (est.value - expected).abs();
                        Verdict::new(
                            "scale_ratio",
                            Status::from_bool(gap <= tol),
                            Some(tol),
                            format!(
                                "g(t)/g(2t) = {} vs 2^{} = {}",
                                human(est.value),
                                human(-scale.exponent),
                                human(expected)
                            ),
                        )
                    }
                    _ => Verdict::skipped("scale_ratio", "no closed-form scale to compare"),
                });
                block.insert("self_neglecting".into(), to_value(&r));
            }
        }
    }

    if all || a.sv_inverse {
        let grid = u_grid(&g, a.grids.u_min, env)?;
        match check_sv_inverse_rapid(&g, &default_sv_lambdas(), &grid) {
            Ok(r) => {
                let last: Vec<String> = r
                    .series
                    .iter()
                    .map(|s| {
                        let end = s.ratios.last().map_or(f64::NAN, |p| p.1);
                        format!("lambda {}: {}", human(s.lambda), human(end))
                    })
                    .collect();
                let detail = format!("final ratios {}", last.join(", "));
                out.line("slow-variation inverse", &detail);
                verdicts.push(Verdict::new(
                    "sv_inverse",
                    Status::from_bool(r.pass),
                    Some(copula_tail::tail_numeric::SV_RATIO_BOUND),
                    detail,
                ));
                block.insert("sv_inverse".into(), to_value(&r));
            }
            Err(Error::Precondition(msg)) => {
                verdicts.push(Verdict::skipped(
                    "sv_inverse",
                    format!("not applicable: {msg}"),
                ));
                block.insert(
                    "sv_inverse".into(),
                    json!({"status": "SKIPPED", "reason": msg}),
                );
            }
            Err(e) => return Err(e.into()),
        }
    }

    out.doc.checks = Some(Value::Object(block));
    out.doc.verdicts = verdicts;
    Ok(out)
}
