use super::*;
use proptest::prelude::*;

fn catalog() -> Vec<Generator<f64>> {
    vec![
        Generator::clayton(2.0).unwrap(),
        Generator::clayton(0.3).unwrap(),
        Generator::gumbel(1.0).unwrap(),
        Generator::gumbel(2.0).unwrap(),
        Generator::gumbel(4.0).unwrap(),
        Generator::frank(1.0).unwrap(),
        Generator::frank(8.0).unwrap(),
        Generator::joe_b5(1.0).unwrap(),
        Generator::joe_b5(2.0).unwrap(),
        Generator::neg_binomial(0.3, 2.0).unwrap(),
        Generator::neg_binomial(0.0, 0.7).unwrap(),
        Generator::log_sv(),
    ]
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

#[test]
fn construction_enforces_ranges() {
    assert!(Generator::clayton(0.0).is_err());
    assert!(Generator::gumbel(0.99).is_err());
    assert!(Generator::frank(-1.0).is_err());
    assert!(Generator::joe_b5(0.5).is_err());
    assert!(Generator::neg_binomial(1.0, 1.0).is_err());
    assert!(Generator::neg_binomial(0.5, 0.0).is_err());
    assert!(Generator::clayton(f64::NAN).is_err());
}

#[test]
fn point_values() {
    let c1 = Generator::<f64>::clayton(1.0).unwrap();
    assert!((c1.psi(1.0).unwrap() - 0.5).abs() < 1e-15);
    assert_eq!(Generator::log_sv().psi(0.0).unwrap(), 1.0);
    for g in catalog() {
        assert_eq!(g.psi(0.0).unwrap(), 1.0, "{g}");
        assert_eq!(g.log_psi(0.0).unwrap(), 0.0, "{g}");
        assert_eq!(g.psi_inv(1.0).unwrap(), 0.0, "{g}");
    }
    let g2 = Generator::gumbel(2.0).unwrap();
    assert!(rel(g2.log_psi(1e8).unwrap(), -1e4) < 1e-14);
    assert!(rel(g2.psi_inv((-3.0f64).exp()).unwrap(), 9.0) < 1e-13);
    let f1 = Generator::frank(1.0).unwrap();
    assert!(rel(f1.log_psi(50.0).unwrap(), -50.458675145387082) < 1e-13);
    let b5 = Generator::joe_b5(2.0).unwrap();
    assert!(rel(b5.log_psi(40.0).unwrap(), -40.693147180559945) < 1e-13);
    let nb = Generator::neg_binomial(0.3, 2.0).unwrap();
    assert!(rel(nb.log_psi(100.0).unwrap(), -200.71334988787746) < 1e-13);
    let sv = Generator::log_sv();
    for u in [1.0, 0.5, 0.1, 0.05] {
        let expect = (1.0f64 / u).exp() - std::f64::consts::E;
        assert!(rel(sv.psi_inv(u).unwrap(), expect) < 1e-12 || expect == 0.0);
    }
}

#[test]
fn domain_errors() {
    let g = Generator::clayton(1.0).unwrap();
    assert!(matches!(g.psi(-1.0), Err(Error::Domain(_))));
    assert!(matches!(g.psi(f64::NAN), Err(Error::Domain(_))));
    assert!(matches!(g.psi_inv(0.0), Err(Error::InfiniteInverse)));
    assert!(matches!(g.psi_inv(1.5), Err(Error::Domain(_))));
    assert!(matches!(g.psi_inv_from_log(0.1), Err(Error::Domain(_))));
    assert!(matches!(g.psi_deriv(0.0, 1), Err(Error::Domain(_))));
    assert!(matches!(g.psi_deriv(1.0, 99), Err(Error::Capability(_))));
}

#[test]
fn derivatives_match_high_precision_oracle() {
    let cases: Vec<(Generator<f64>, [f64; 7])> = vec![
        (
            Generator::clayton(2.0).unwrap(),
            [
                0.76696498884737044,
                -0.22557793789628542,
                0.19903935696731067,
                -0.29270493671663333,
                0.60262781088718628,
                -1.5951912641131401,
                5.1609129133072181,
            ],
        ),
        (
            Generator::gumbel(2.0).unwrap(),
            [
                0.43315483576206821,
                -0.25885952598718223,
                0.33959781704872596,
                -0.82015943867126357,
                3.0504257870576292,
                -15.545043020527883,
                101.02185719877126,
            ],
        ),
        (
            Generator::frank(1.0).unwrap(),
            [
                0.37673448328176936,
                -0.45751726278945033,
                0.66683930853980127,
                -1.2770202988668805,
                3.334887289022843,
                -11.495828295919052,
                49.590264620081504,
            ],
        ),
        (
            Generator::frank(3.0).unwrap(),
            [
                0.21279908138630906,
                -0.29781457268742834,
                0.56389513180241495,
                -1.5715122581119587,
                6.2874940858707476,
                -33.473564287129491,
                222.83246509745568,
            ],
        ),
        (
            Generator::joe_b5(2.0).unwrap(),
            [
                0.29048277243706726,
                -0.34994591005005823,
                0.52254515810693688,
                -1.1231302689024191,
                3.7202653471411079,
                -17.796063595684454,
                111.8909636852045,
            ],
        ),
        (
            Generator::neg_binomial(0.3, 2.0).unwrap(),
            [
                0.16683984288462474,
                -0.39209179230854688,
                0.99009579793668756,
                -2.7421116147446414,
                8.4729164963915506,
                -29.487195000015407,
                115.67508237207337,
            ],
        ),
        (
            Generator::log_sv(),
            [
                0.81357827283985915,
                -0.19363810219693788,
                0.14882260539325176,
                -0.17985477716424993,
                0.29404321267288595,
                -0.60443526941769233,
                1.4950189118033344,
            ],
        ),
    ];
    for (g, expect) in cases {
        for (n, &e) in expect.iter().enumerate() {
            let v = g.psi_deriv(0.7, n).unwrap();
            assert!(rel(v, e) < 1e-12, "{g} n={n}: {v} vs {e}");
        }
    }
}

#[test]
fn spec_derivative_examples() {
    let c1 = Generator::<f64>::clayton(1.0).unwrap();
    assert!((c1.psi_deriv(1.0, 1).unwrap() + 0.25).abs() < 1e-15);
    let g1 = Generator::gumbel(1.0).unwrap();
    assert!(rel(g1.psi_deriv(2.0, 3).unwrap(), -(-2.0f64).exp()) < 1e-14);
}

#[test]
fn hazard_scale_closed_forms() {
    let g2 = Generator::gumbel(2.0).unwrap();
    assert!(rel(g2.hazard_scale(4.0).unwrap(), 4.0) < 1e-14);
    assert!(rel(g2.hazard_scale(3.0).unwrap(), 3.4641016151377546) < 1e-14);
    let c1 = Generator::<f64>::clayton(1.0).unwrap();
    for t in [0.1, 1.0, 10.0] {
        assert!(rel(c1.hazard_scale(t).unwrap(), 1.0 + t) < 1e-14);
    }
    let f1 = Generator::frank(1.0).unwrap();
    assert!(rel(f1.hazard_scale(3.0).unwrap(), 0.98409656243700844) < 1e-13);
    assert!((f1.hazard_scale(60.0).unwrap() - 1.0).abs() < 1e-15);
    let f3 = Generator::frank(3.0).unwrap();
    assert!(rel(f3.hazard_scale(3.0).unwrap(), 0.97596374717890047) < 1e-13);
    let b5 = Generator::joe_b5(2.0).unwrap();
    assert!(rel(b5.hazard_scale(3.0).unwrap(), 0.98723339842509421) < 1e-13);
    let nb = Generator::neg_binomial(0.3, 2.0).unwrap();
    assert!(rel(nb.hazard_scale(3.0).unwrap(), 0.49253193974482041) < 1e-13);
    let sv = Generator::log_sv();
    assert!(rel(sv.hazard_scale(3.0).unwrap(), 9.9707872158075859) < 1e-13);
}

#[test]
fn declared_regimes() {
    assert_eq!(
        Generator::clayton(4.0).unwrap().declared_regime(),
        Some(Regime::RegularlyVarying { index: 0.25 })
    );
    assert_eq!(
        Generator::<f64>::log_sv().declared_regime(),
        Some(Regime::SlowlyVarying)
    );
    assert_eq!(
        Generator::gumbel(2.0).unwrap().declared_regime(),
        Some(Regime::RapidlyVarying {
            gamma_index: 0.5,
            scale: PowerScale::power(1.0, 0.5)
        })
    );
    let custom = Generator::<f64>::custom(CustomGenerator::exp_neg_square());
    assert_eq!(custom.declared_regime(), None);
}

#[test]
fn deep_tail_inverse_round_trip() {
    for g in catalog() {
        let mut lu = -1e-12_f64;
        while lu > -700.0 {
            let t = g.psi_inv_from_log(lu).unwrap();
            let back = g.log_psi(t).unwrap();
            if !t.is_finite() {
                // phi^{-1}(u) overflows (Clayton, LogSV); the log form stays finite.
                let lt = g.log_psi_inv_from_log(lu).unwrap();
                let back = g.log_psi_at_log(lt).unwrap();
                assert!(rel(back, lu) < 1e-10, "{g} lu={lu}");
            } else {
                // |ln phi(phi^{-1}(u)) - ln u| bounds the relative error in u.
                assert!(
                    (back - lu).abs() <= 1e-10 * lu.abs().max(1.0),
                    "{g} lu={lu} back={back}"
                );
            }
            lu *= 3.0;
        }
    }
}

#[test]
fn log_inverse_matches_inverse() {
    for g in catalog() {
        for lu in [-1e-6, -0.3, -2.0, -30.0, -300.0] {
            let t = g.psi_inv_from_log(lu).unwrap();
            if t.is_finite() && t > 0.0 {
                let lt = g.log_psi_inv_from_log(lu).unwrap();
                assert!(
                    (lt - t.ln()).abs() < 1e-12 * t.ln().abs().max(1.0),
                    "{g} lu={lu}"
                );
                let lp = g.log_psi_at_log(lt).unwrap();
                assert!((lp - lu).abs() < 1e-10 * lu.abs().max(1.0), "{g} lu={lu}");
            }
        }
    }
}

#[test]
fn one_minus_forms_agree_with_complements() {
    for g in catalog() {
        for t in [1e-8, 1e-3, 0.5, 3.0] {
            let a = g.one_minus_psi(t).unwrap();
            let b = 1.0 - g.psi(t).unwrap();
            assert!((a - b).abs() < 1e-12, "{g} t={t}");
            let s = a;
            let back = g.psi_inv_one_minus(s).unwrap();
            assert!(rel(back, t) < 1e-9, "{g} t={t} back={back}");
        }
    }
}

#[test]
fn custom_generator_fallbacks() {
    let exp_only = Generator::custom(CustomGenerator::new("exp", |t: f64| (-t).exp()));
    let t = exp_only.psi_inv(0.25).unwrap();
    assert!(rel(t, 4.0f64.ln()) < 1e-11);
    let t = exp_only.psi_inv_from_log(-500.0).unwrap();
    assert!(rel(t, 500.0) < 1e-11);
    for n in 1..=6 {
        let d = exp_only.psi_deriv(1.2, n).unwrap();
        let e = (-1.0f64).powi(n as i32) * (-1.2f64).exp();
        assert!(rel(d, e) < 1e-2, "n={n}: {d}");
    }
    assert!(matches!(
        exp_only.psi_deriv(1.0, 9),
        Err(Error::Capability(_))
    ));
    assert!(rel(exp_only.hazard_scale(2.0).unwrap(), 1.0) < 1e-4);

    let sq = Generator::<f64>::custom(CustomGenerator::exp_neg_square());
    let d2 = sq.psi_deriv(0.05, 2).unwrap();
    assert!(rel(d2, (4.0 * 0.0025 - 2.0) * (-0.0025f64).exp()) < 1e-13);
}

#[test]
fn generic_over_f32() {
    let g = Generator::<f32>::gumbel(2.0).unwrap();
    assert!((g.psi_inv((-3.0f32).exp()).unwrap() - 9.0).abs() < 1e-4);
    let f = Generator::<f32>::frank(1.0).unwrap();
    assert!((f.log_psi(50.0).unwrap() + 50.458675).abs() < 1e-3);
}

fn any_catalog() -> impl Strategy<Value = Generator<f64>> {
    prop_oneof![
        (0.05f64..10.0).prop_map(|t| Generator::clayton(t).unwrap()),
        (1.0f64..10.0).prop_map(|t| Generator::gumbel(t).unwrap()),
        (0.05f64..30.0).prop_map(|t| Generator::frank(t).unwrap()),
        (1.0f64..10.0).prop_map(|t| Generator::joe_b5(t).unwrap()),
        ((0.0f64..0.95), (0.1f64..5.0)).prop_map(|(t, a)| Generator::neg_binomial(t, a).unwrap()),
        Just(Generator::log_sv()),
    ]
}

proptest! {
    #[test]
    fn strictly_decreasing(g in any_catalog(), t in 0.0f64..50.0, f in 1.01f64..3.0) {
        let t2 = t * f + 1e-6;
        prop_assert!(g.log_psi(t2).unwrap() < g.log_psi(t).unwrap());
        prop_assert!(g.psi(t2).unwrap() <= g.psi(t).unwrap());
    }

    #[test]
    fn round_trip(g in any_catalog(), e in -300.0f64..0.0) {
        let u = 10f64.powf(e).min(1.0 - 1e-12);
        let lu = u.ln();
        let lt = g.log_psi_inv_from_log(lu).unwrap();
        let back = g.log_psi_at_log(lt).unwrap();
        // relative error in u is |back - lu| to first order
        prop_assert!((back - lu).abs() <= 1e-10 * lu.abs().max(1.0), "u={} back={}", u, back);
        if u > 1e-15 {
            if let Ok(t) = g.psi_inv(u) {
                if t.is_finite() {
                    let p = g.psi(t).unwrap();
                    prop_assert!((p - u).abs() <= 1e-10 * u, "u={} p={}", u, p);
                }
            }
        }
    }

    #[test]
    fn sign_alternation(g in any_catalog(), lt in -2.0f64..2.0) {
        let t = 10f64.powf(lt);
        for n in 0..=6 {
            let v = g.psi_deriv(t, n).unwrap();
            let s = if n % 2 == 0 { v } else { -v };
            prop_assert!(s >= -1e-12 * v.abs(), "n={} t={} v={}", n, t, v);
        }
    }

    #[test]
    fn hazard_consistency(g in any_catalog(), lt in -2.0f64..2.0) {
        let t = 10f64.powf(lt);
        let h = g.hazard_scale(t).unwrap();
        let p = g.psi(t).unwrap();
        let d1 = g.psi_deriv(t, 1).unwrap();
        prop_assert!((h * d1 + p).abs() <= 1e-9 * p);
    }
}
