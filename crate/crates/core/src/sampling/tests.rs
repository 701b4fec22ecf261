use super::*;
use crate::copula::{copula_cdf, UnitVector, WeightVector};

fn supported() -> Vec<Generator<f64>> {
    [
        "clayton:theta=1",
        "clayton:theta=0.3",
        "gumbel:theta=1",
        "gumbel:theta=2.5",
        "frank:theta=2",
        "frank:theta=15",
        "joeb5:theta=1",
        "joeb5:theta=3",
        "negbin:theta=0.4,alpha=1.5",
        "negbin:theta=0,alpha=2",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect()
}

fn mean_and_se(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

#[test]
fn laplace_transform_of_mixing_draws() {
    for (i, g) in supported().iter().enumerate() {
        let v = sample_mixing(g, 100_000, 11 + i as u64).unwrap();
        assert!(v.iter().all(|x| *x > 0.0), "{g}");
        for t in [0.25, 1.0, 3.0] {
            let e: Vec<f64> = v.iter().map(|x| (-t * x).exp()).collect();
            let (m, se) = mean_and_se(&e);
            let exact = g.psi(t).unwrap();
            assert!(
                (m - exact).abs() <= 3.0 * se.max(1e-12),
                "{g} t={t}: {m} vs {exact} (se {se})"
            );
        }
    }
}

#[test]
fn clayton_mixing_mean() {
    let g = Generator::<f64>::clayton(1.0).unwrap();
    let v = sample_mixing(&g, 1_000_000, 2).unwrap();
    let (m, se) = mean_and_se(&v);
    assert!((m - 1.0).abs() < 3.0 * se, "{m} {se}");
    assert_eq!(MixingLaw::for_generator(&g).unwrap().mean(), 1.0);
}

#[test]
fn logsv_and_custom_are_unsupported() {
    assert!(matches!(
        sample_mixing(&Generator::<f64>::log_sv(), 10, 1),
        Err(Error::UnsupportedSampling(_))
    ));
    let c = Generator::<f64>::custom(crate::generators::CustomGenerator::exp_neg_square());
    assert!(matches!(
        sample_copula(&c, 2, 10, 1),
        Err(Error::UnsupportedSampling(_))
    ));
}

#[test]
fn batches_are_reproducible_and_prefix_stable() {
    let g = Generator::<f64>::gumbel(2.0).unwrap();
    let a = sample_copula(&g, 3, 10_000, 42).unwrap();
    let b = sample_copula(&g, 3, 10_000, 42).unwrap();
    assert_eq!(a, b);
    let c = sample_copula(&g, 3, 10_000, 43).unwrap();
    assert_ne!(a.data(), c.data());
    // chunks draw from fixed substreams, so a shorter batch is a prefix
    let short = sample_copula(&g, 3, 5_000, 42).unwrap();
    assert_eq!(short.data(), &a.data()[..15_000]);
    assert_eq!(a.seed(), Some(42));
    assert_eq!(a.family(), Some("gumbel:theta=2"));
}

#[test]
fn copula_samples_stay_inside_the_cube() {
    for g in supported() {
        let b = sample_copula(&g, 4, 20_000, 9).unwrap();
        assert!(b.data().iter().all(|u| *u > 0.0 && *u < 1.0), "{g}");
    }
}

#[test]
fn margins_are_uniform() {
    for g in supported() {
        let b = sample_copula(&g, 2, 100_000, 17).unwrap();
        for j in 0..2 {
            let d = ks_uniform(&b.column(j)).unwrap();
            assert!(d < ks_critical_1pct(b.len()), "{g} column {j}: {d}");
        }
    }
}

#[test]
fn mixture_margins_have_survival_phi() {
    for g in supported() {
        let b = sample_mixture(&g, 2, 100_000, 23).unwrap();
        let col = b.column(0);
        for t in [0.1, 1.0, 4.0] {
            let p = g.psi(t).unwrap();
            let hits = col.iter().filter(|x| **x > t).count() as f64 / col.len() as f64;
            let se = (p * (1.0 - p) / col.len() as f64).sqrt();
            assert!((hits - p).abs() <= 3.0 * se, "{g} t={t}: {hits} vs {p}");
        }
    }
}

#[test]
fn independence_has_zero_kendall_tau() {
    let g = Generator::<f64>::gumbel(1.0).unwrap();
    let b = sample_copula(&g, 2, 100_000, 5).unwrap();
    let tau = kendall_tau(&b.column(0), &b.column(1)).unwrap();
    assert!(tau.abs() < 3.0 * kendall_tau_null_sd(b.len()), "{tau}");
}

#[test]
fn kendall_tau_is_exchangeable_and_matches_clayton() {
    // Kendall's tau of Clayton is theta / (theta + 2)
    let g = Generator::<f64>::clayton(2.0).unwrap();
    let b = sample_copula(&g, 2, 50_000, 8).unwrap();
    let t12 = kendall_tau(&b.column(0), &b.column(1)).unwrap();
    let swapped = b.permuted(&[1, 0]).unwrap();
    let t21 = kendall_tau(&swapped.column(0), &swapped.column(1)).unwrap();
    assert_eq!(t12, t21);
    assert!((t12 - 0.5).abs() < 0.01, "{t12}");
}

#[test]
fn empirical_matches_exact_cdf() {
    let g = Generator::<f64>::clayton(2.0).unwrap();
    let b = sample_copula(&g, 2, 200_000, 31).unwrap();
    let e = empirical_copula(&b, &[0.5, 0.5]).unwrap();
    let exact = copula_cdf(&g, &UnitVector::new(vec![0.5, 0.5]).unwrap()).unwrap();
    assert!(e.z_score(exact) <= 3.0, "{} vs {exact}", e.value);
}

#[test]
fn empirical_panel_within_four_sigma() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
    for g in supported() {
        let b = sample_copula(&g, 3, 50_000, 3).unwrap();
        let mut failures = 0;
        let trials = 40;
        for _ in 0..trials {
            let u: Vec<f64> = (0..3).map(|_| rng.random_range(0.05..0.95)).collect();
            let e = empirical_copula(&b, &u).unwrap();
            let exact = copula_cdf(&g, &UnitVector::new(u).unwrap()).unwrap();
            if e.z_score(exact) > 4.0 {
                failures += 1;
            }
        }
        // P(|Z| > 4) is about 6e-5 per point
        assert!(failures <= 1, "{g}: {failures} of {trials}");
    }
}

#[test]
fn clayton_lower_tail_at_one_percent() {
    let g = Generator::<f64>::clayton(1.0).unwrap();
    let b = sample_copula(&g, 2, 1_000_000, 13).unwrap();
    let w = WeightVector::ones(2).unwrap();
    let e = empirical_lower_tail(&b, 0.01, &w).unwrap();
    let exact = 1.0 / 199.0;
    assert!(e.z_score(exact) <= 3.0, "{}", e.value);
    let pts = empirical_lambda_l(&b, &[0.01]).unwrap();
    let ratio = pts[0].ratio.unwrap();
    assert!(
        (ratio - 0.5025).abs() <= 3.0 * pts[0].std_error.unwrap(),
        "{ratio}"
    );
}

#[test]
fn independence_lambda_shrinks_with_u() {
    let g = Generator::<f64>::gumbel(1.0).unwrap();
    let b = sample_copula(&g, 2, 200_000, 21).unwrap();
    let pts = empirical_lambda_l(&b, &[0.2, 0.05, 0.01]).unwrap();
    for p in &pts {
        let r = p.ratio.unwrap();
        assert!((r - p.u).abs() <= 4.0 * p.std_error.unwrap(), "{p:?}");
    }
}

#[test]
fn copula_rows_are_phi_of_mixture_rows() {
    // same seed, same draws: U = phi(X) elementwise, also deep in the tail
    let g = Generator::<f64>::clayton(4.0).unwrap();
    let x = sample_mixture(&g, 2, 20_000, 4).unwrap();
    let u = sample_copula(&g, 2, 20_000, 4).unwrap();
    let mut deep = 0;
    for (xi, ui) in x.data().iter().zip(u.data()) {
        let expect = g.log_psi(*xi).unwrap().exp();
        assert!((ui / expect - 1.0).abs() < 1e-12, "{xi} {ui} {expect}");
        deep += usize::from(*ui < 1e-3);
    }
    assert!(deep > 0);
}

#[test]
fn single_precision_batches() {
    let g = Generator::<f32>::frank(3.0).unwrap();
    let b = sample_copula(&g, 2, 1000, 1).unwrap();
    assert!(b.data().iter().all(|u| *u > 0.0 && *u < 1.0));
}
