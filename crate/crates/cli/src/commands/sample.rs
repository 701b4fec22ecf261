use copula_tail::sampling::{
    empirical_lambda_l, empirical_lower_tail, read_batch, write_batch, BatchFormat,
};
use copula_tail::{
    copula_cdf, sample_copula, sample_mixture, BatchKind, SampleBatch64, UnitVector, WeightVector,
};
use serde_json::{json, Map, Value};

use super::{list, parse_family, positive, to_value, weights, Output};
use crate::args::{EmpiricalArgs, FileFormat, SampleArgs};
use crate::format::human;
use crate::report::{Invocation, Quantity, ReportDocument, Status, Verdict};
use crate::CliError;

const DEFAULT_LAMBDA_GRID: [f64; 4] = [0.1, 0.05, 0.02, 0.01];

fn kind_name(k: BatchKind) -> &'static str {
    match k {
        BatchKind::Copula => "copula",
        BatchKind::Mixture => "mixture",
    }
}

pub fn run_sample(a: &SampleArgs, invocation: Invocation) -> Result<Output, CliError> {
    let g = parse_family(&a.family)?;
    if a.n == 0 {
        return Err(CliError::usage("--n must be positive"));
    }
    let batch = if a.mixture {
        sample_mixture(&g, a.d, a.n, a.seed)?
    } else {
        sample_copula(&g, a.d, a.n, a.seed)?
    };
    let format = match a.out_format {
        Some(FileFormat::Csv) => BatchFormat::Csv,
        Some(FileFormat::Binary) => BatchFormat::Binary,
        None => BatchFormat::from_path(&a.out),
    };
    write_batch(&batch, &a.out, format)?;
    let back: SampleBatch64 = read_batch(&a.out)?;
    let same =
        back.data() == batch.data() && back.dim() == batch.dim() && back.kind() == batch.kind();
    let bytes = std::fs::metadata(&a.out).map(|m| m.len()).unwrap_or(0);

    let mut doc = ReportDocument::new("sample", invocation);
    doc.family = Some(g.to_string());
    doc.dimension = Some(a.d);
    doc.numeric = Some(json!({
        "kind": kind_name(batch.kind()),
        "rows": batch.len(),
        "seed": a.seed,
        "path": a.out.display().to_string(),
        "format": to_value(&format),
        "bytes": bytes,
    }));
    doc.verdicts.push(Verdict::new(
        "file_round_trip",
        Status::from_bool(same),
        None,
        "batch read back from the file equals the generated batch",
    ));
    let mut out = Output::new(doc);
    out.line("family", g.to_string());
    out.line(
        "batch",
        format!(
            "{} rows, d = {}, {}",
            batch.len(),
            a.d,
            kind_name(batch.kind())
        ),
    );
    out.line("seed", a.seed.to_string());
    out.line("written", format!("{} ({bytes} bytes)", a.out.display()));
    Ok(out)
}

pub fn run_empirical(a: &EmpiricalArgs, invocation: Invocation) -> Result<Output, CliError> {
    let batch: SampleBatch64 = read_batch(&a.input)?;
    if batch.kind() != BatchKind::Copula {
        return Err(CliError::usage(format!(
            "{} holds a mixture batch; empirical tail estimates need a copula batch",
            a.input.display()
        )));
    }
    let d = batch.dim();
    let sigma = positive("--sigma", a.sigma)?;
    let g = a.family.as_deref().map(parse_family).transpose()?;

    let mut doc = ReportDocument::new("empirical", invocation);
    doc.family = g.as_ref().map(|g| g.to_string());
    doc.dimension = Some(d);
    let mut out_lines = vec![(
        "input",
        format!("{} ({} rows, d = {d})", a.input.display(), batch.len()),
    )];
    if let Some(f) = batch.family() {
        out_lines.push(("batch family", f.to_string()));
    }
    let mut block = Map::new();
    let mut verdicts = Vec::new();

    if let Some(u) = a.u {
        let w = weights(a.w.as_ref(), d, "--w")?;
        let wv = WeightVector::new(w.clone())?;
        let e = empirical_lower_tail(&batch, u, &wv)?;
        out_lines.push((
            "C_n(u w)",
            format!(
                "{} +/- {} ({} hits)",
                human(e.value),
                human(e.std_error),
                e.hits
            ),
        ));
        let mut entry = json!({
            "u": u,
            "w": w,
            "estimate": to_value(&Quantity::with_method(e.value, "empirical-frequency", e.std_error)),
            "std_error": e.std_error,
            "hits": e.hits,
            "n": e.n,
        });
        verdicts.push(match &g {
            None => Verdict::skipped("lower_tail_agreement", "no --family to compare against"),
            Some(g) => {
                let point: Vec<f64> = w.iter().map(|wi| (u * wi).min(1.0)).collect();
                let exact = copula_cdf(g, &UnitVector::new(point)?)?;
                let z = e.z_score(exact);
                entry["exact"] = to_value(&Quantity::closed_form(exact));
                entry["z_score"] = json!(z);
                out_lines.push(("C(u w)", human(exact)));
                Verdict::new(
                    "lower_tail_agreement",
                    Status::from_bool(z <= sigma),
                    Some(sigma),
                    format!(
                        "empirical {} vs exact {}: {} standard errors",
                        human(e.value),
                        human(exact),
                        human(z)
                    ),
                )
            }
        });
        block.insert("lower_tail".into(), entry);
    }

    if a.u_grid.is_some() || a.u.is_none() {
        let grid = a
            .u_grid
            .clone()
            .unwrap_or_else(|| DEFAULT_LAMBDA_GRID.to_vec());
        let points = empirical_lambda_l(&batch, &grid)?;
        let mut rows = Vec::new();
        let mut worst: Option<f64> = None;
        for p in &points {
            let mut row = to_value(p);
            if let Some(g) = &g {
                let exact = copula_cdf(g, &UnitVector::diagonal(p.u, d)?)? / p.u;
                row["exact_ratio"] = to_value(&Quantity::closed_form(exact));
                if let Some(r) = p.ratio {
                    let n = batch.len() as f64;
                    let se = (exact * p.u * (1.0 - exact * p.u) / n).sqrt() / p.u;
                    let z = (r - exact).abs() / se;
                    row["z_score"] = json!(z);
                    worst = Some(worst.map_or(z, |w: f64| w.max(z)));
                }
            }
            rows.push(row);
            let text = match p.ratio {
                Some(r) => format!("{} ({} hits)", human(r), p.hits),
                None => "censored (no hits)".to_string(),
            };
            out_lines.push(("C_n(u 1)/u", format!("u = {}: {text}", human(p.u))));
        }
        block.insert("lambda_curve".into(), Value::Array(rows));
        verdicts.push(match (&g, worst) {
            (None, _) => Verdict::skipped("lambda_agreement", "no --family to compare against"),
            (Some(_), None) => Verdict::skipped("lambda_agreement", "every grid point censored"),
            (Some(_), Some(z)) => Verdict::new(
                "lambda_agreement",
                Status::from_bool(z <= sigma),
                Some(sigma),
                format!(
                    "largest deviation {} standard errors on u = {}",
                    human(z),
                    list(&grid)
                ),
            ),
        });
    }

    doc.empirical = Some(Value::Object(block));
    doc.verdicts = verdicts;
    let mut out = Output::new(doc);
    for (l, t) in out_lines {
        out.line(l, t);
    }
    Ok(out)
}
