use std::fmt::Write as _;

use copula_tail::scalar::geometric_grid;
use copula_tail::tail_numeric::{default_u_grid, estimate_tail_order, LIMIT_TOLERANCE};
use copula_tail::{log_copula_cdf, theoretical_profile, Error};
use serde_json::json;

use super::{list, parse_family, to_value, weights, Output};
use crate::args::GridArgs;
use crate::format::{human, machine};
use crate::grids::{Env, UGRID_MIN_VAR};
use crate::report::{Invocation, Quantity, ReportDocument, Status, Verdict};
use crate::CliError;

pub const GRID_HEADER: &str = "u,c_uw,c_uw_over_u_k";
const DEFAULT_RANGE: (f64, f64, usize) = (1e-8, 0.5, 41);

/// One row of the plotting grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRow {
    pub u: f64,
    pub c: f64,
    pub normalized: f64,
}

/// Parses the CSV written by `ctl grid`.
pub fn read_grid_csv(text: &str) -> Result<Vec<GridRow>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == GRID_HEADER => {}
        other => return Err(format!("expected header `{GRID_HEADER}`, found {other:?}")),
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| {
            let f: Vec<f64> = l
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| format!("row {}: {e}", i + 1))?;
            match f[..] {
                [u, c, normalized] => Ok(GridRow { u, c, normalized }),
                _ => Err(format!(
                    "row {}: expected 3 fields, found {}",
                    i + 1,
                    f.len()
                )),
            }
        })
        .collect()
}

fn range(a: &GridArgs, env: &Env) -> Result<(f64, f64, usize), CliError> {
    let (mut lo, mut hi, mut n) = DEFAULT_RANGE;
    match a.u_range.as_deref() {
        None => {
            if let Some(v) = env.vars().get(UGRID_MIN_VAR) {
                lo = v.trim().parse().map_err(|_| {
                    CliError::usage(format!("{UGRID_MIN_VAR}: cannot parse `{v}` as a number"))
                })?;
            }
        }
        Some([l, h]) => (lo, hi) = (*l, *h),
        Some([l, h, p]) => {
            if !(*p >= 2.0 && p.fract() == 0.0) {
                return Err(CliError::usage(format!(
                    "--u-range point count must be an integer >= 2, got {p}"
                )));
            }
            (lo, hi, n) = (*l, *h, *p as usize);
        }
        Some(other) => {
            return Err(CliError::usage(format!(
                "--u-range takes min,max[,points], got {} values",
                other.len()
            )))
        }
    }
    if !(lo > 0.0 && lo < hi && hi <= 1.0) {
        return Err(CliError::usage(format!(
            "u range needs 0 < min < max <= 1, got {lo},{hi}"
        )));
    }
    Ok((lo, hi, n))
}

pub fn run(a: &GridArgs, env: &Env, invocation: Invocation) -> Result<Output, CliError> {
    let g = parse_family(&a.family)?;
    let d = a.d;
    let w = weights(a.w_ray.as_ref(), d, "--w-ray")?;
    if w.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(CliError::usage("--w-ray entries must be strictly positive"));
    }
    let (lo, hi, n) = range(a, env)?;
    let k = match a.k {
        Some(k) => Quantity::with_method(k, "user", 0.0),
        None => match theoretical_profile(&g, d) {
            Ok(p) => Quantity::closed_form(p.tail_order),
            Err(Error::Capability(_)) => {
                let e = estimate_tail_order(&g, d, &default_u_grid(&g), LIMIT_TOLERANCE)?;
                Quantity::with_method(e.value, &super::method_name(&e.method), e.residual)
            }
            Err(e) => return Err(e.into()),
        },
    };
    let log_w: Vec<f64> = w.iter().map(|x| x.ln()).collect();
    let mut rows = Vec::with_capacity(n);
    for u in geometric_grid(hi, lo, n) {
        let lu = u.ln();
        let point: Vec<f64> = log_w.iter().map(|lw| (lu + lw).min(0.0)).collect();
        let lc = log_copula_cdf(&g, &point)?;
        rows.push(GridRow {
            u,
            c: lc.exp(),
            normalized: (lc - k.value * lu).exp(),
        });
    }
    let mut csv = String::from(GRID_HEADER);
    csv.push('\n');
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{}",
            machine(r.u),
            machine(r.c),
            machine(r.normalized)
        );
    }
    let finite = rows
        .iter()
        .all(|r| r.c.is_finite() && r.normalized.is_finite());

    let mut doc = ReportDocument::new("grid", invocation);
    doc.family = Some(g.to_string());
    doc.dimension = Some(d);
    let mut numeric = json!({
        "w": w,
        "u_range": {"min": lo, "max": hi, "points": n},
        "k": to_value(&k),
        "columns": GRID_HEADER.split(',').collect::<Vec<_>>(),
    });
    doc.verdicts.push(Verdict::new(
        "finite_values",
        Status::from_bool(finite),
        None,
        "every grid value is finite",
    ));
    let last = rows.last().copied();
    let mut out = match &a.out {
        Some(path) => {
            std::fs::write(path, &csv)
                .map_err(|e| CliError::failure(format!("{}: {e}", path.display())))?;
            numeric["path"] = json!(path.display().to_string());
            doc.numeric = Some(numeric);
            Output::new(doc)
        }
        None => {
            numeric["rows"] = json!(rows
                .iter()
                .map(|r| [r.u, r.c, r.normalized])
                .collect::<Vec<_>>());
            doc.numeric = Some(numeric);
            let mut out = Output::new(doc);
            out.raw = Some(csv);
            out
        }
    };
    out.line("family", format!("{g}  (d = {d}, w = {})", list(&w)));
    out.line("k", format!("{}  [{}]", human(k.value), k.method));
    out.line(
        "rows",
        format!("{n} on u in [{}, {}]", human(lo), human(hi)),
    );
    if let Some(r) = last {
        out.line("C(u w)/u^k at min u", human(r.normalized));
    }
    if let Some(p) = &a.out {
        out.line("written", p.display().to_string());
    }
    Ok(out)
}
