use copula_tail::{copula_cdf, Generator64, UnitVector};
use copula_tail_cli::{read_grid_csv, run, Env, ReportDocument};
use proptest::prelude::*;

fn json(args: &[String]) -> ReportDocument {
    let argv = std::iter::once("ctl".to_string())
        .chain(args.iter().cloned())
        .chain(["--format".to_string(), "json".to_string()]);
    let out = run(argv, &Env::default());
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    ReportDocument::from_json(&out.stdout).unwrap()
}

fn family() -> impl Strategy<Value = String> {
    prop_oneof![
        (0.1f64..8.0).prop_map(|t| format!("clayton:theta={t}")),
        (1.0f64..6.0).prop_map(|t| format!("gumbel:theta={t}")),
        (0.1f64..20.0).prop_map(|t| format!("frank:theta={t}")),
        (1.0f64..6.0).prop_map(|t| format!("joeb5:theta={t}")),
        ((0.05f64..0.95), (0.2f64..4.0)).prop_map(|(t, a)| format!("negbin:theta={t},alpha={a}")),
        Just("logsv".to_string()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eval_reports_the_library_value_exactly(
        spec in family(),
        u in prop::collection::vec(1e-6f64..1.0, 2..5),
    ) {
        let list = u.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(",");
        let doc = json(&["eval".into(), spec.clone(), "--u".into(), list]);
        let g: Generator64 = spec.parse().unwrap();
        let expected = copula_cdf(&g, &UnitVector::new(u.clone()).unwrap()).unwrap();
        let got = doc.numeric.as_ref().unwrap()["cdf"]["value"].as_f64().unwrap();
        prop_assert_eq!(got.to_bits(), expected.to_bits());
        prop_assert!(!doc.verdicts.is_empty());
        prop_assert_eq!(doc.invocation.argv.len(), 7);
    }

    #[test]
    fn grid_csv_round_trips_and_stays_in_the_unit_interval(
        spec in family(),
        d in 2usize..4,
        lo_exp in -9i32..-2,
        n in 2usize..20,
    ) {
        let range = format!("1e{lo_exp},0.5,{n}");
        let argv = ["ctl", "grid", &spec, "--d", &d.to_string(), "--u-range", &range];
        let out = run(argv, &Env::default());
        prop_assert_eq!(out.code, 0, "{}", out.stderr);
        let rows = read_grid_csv(&out.stdout).unwrap();
        prop_assert_eq!(rows.len(), n);
        let g: Generator64 = spec.parse().unwrap();
        for r in &rows {
            prop_assert!(r.c > 0.0 && r.c <= r.u);
            let exact = copula_cdf(&g, &UnitVector::diagonal(r.u, d).unwrap()).unwrap();
            prop_assert!((r.c / exact - 1.0).abs() < 1e-12, "{} vs {}", r.c, exact);
        }
        prop_assert!(rows.windows(2).all(|w| w[1].u < w[0].u));
    }
}
