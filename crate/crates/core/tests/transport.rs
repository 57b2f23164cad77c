mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use truncation_lab::ensemble::EmpiricalMeasure;
use truncation_lab::limit::LimitMeasure;
use truncation_lab::quadrature::QuadOptions;
use truncation_lab::rng::{stream, Purpose};
use truncation_lab::transport::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn point(z: Complex64) -> EmpiricalMeasure {
    EmpiricalMeasure::uniform(vec![z]).unwrap()
}

#[test]
fn identical_measures_are_at_distance_zero() {
    let mu = EmpiricalMeasure::new(vec![c(0.0, 0.0), c(1.0, 2.0), c(-0.5, 0.1)], vec![0.2, 0.5, 0.3]).unwrap();
    assert!(w1_discrete(&mu, &mu).unwrap().value.abs() < 1e-12);
    assert!(dbl_discrete(&mu, &mu).unwrap().value.abs() < 1e-12);
}

#[test]
fn point_masses() {
    let a = c(0.3, -0.2);
    for b in [c(1.0, 1.0), c(5.0, 0.0), c(0.3, -0.2)] {
        let d = (a - b).norm();
        let w = w1_discrete(&point(a), &point(b)).unwrap();
        assert!((w.value - d).abs() < 1e-12);
        assert_eq!(w.method, Method::ExactLp);
        assert_eq!(w.standard_error, 0.0);
        let bl = dbl_discrete(&point(a), &point(b)).unwrap();
        assert!((bl.value - d.min(2.0)).abs() < 1e-12);
    }
}

#[test]
fn half_unit_shift() {
    let mu = EmpiricalMeasure::uniform(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let nu = EmpiricalMeasure::uniform(vec![c(0.0, 0.0), c(2.0, 0.0)]).unwrap();
    assert!((w1_discrete(&mu, &nu).unwrap().value - 0.5).abs() < 1e-12);
    let (x, p) = (mu.points(), mu.weights());
    assert!((common::w1_by_enumeration(x, p, nu.points(), nu.weights()) - 0.5).abs() < 1e-12);
}

#[test]
fn w1_matches_coupling_enumeration() {
    let mut rng = stream(11, Purpose::Configuration, 0);
    for case in 0..200 {
        let a = 1 + case % 3;
        let b = 1 + (case / 3) % 3;
        let mu = common::random_measure(a, 2.0, &mut rng);
        let nu = common::random_measure(b, 2.0, &mut rng);
        let got = w1_discrete(&mu, &nu).unwrap().value;
        let want = common::w1_by_enumeration(mu.points(), mu.weights(), nu.points(), nu.weights());
        assert!((got - want).abs() < 1e-8, "case {case}: {got} vs {want}");
    }
}

#[test]
fn dbl_matches_dense_lp() {
    let mut rng = stream(12, Purpose::Configuration, 0);
    for case in 0..100 {
        // Spread wide enough that the cap at 2 is active in some cases.
        let scale = if case % 2 == 0 { 0.7 } else { 3.0 };
        let mu = common::random_measure(4, scale, &mut rng);
        let nu = common::random_measure(4, scale, &mut rng);
        let got = dbl_discrete(&mu, &nu).unwrap().value;
        let (pts, charge) = common::pooled(&mu, &nu);
        let want = common::dbl_by_dense_lp(&pts, &charge);
        assert!((got - want).abs() < 1e-8, "case {case}: {got} vs {want}");
    }
}

#[test]
fn dbl_shares_support_with_dense_lp() {
    // Overlapping supports exercise the pooled formulation.
    let mu = EmpiricalMeasure::new(vec![c(0.0, 0.0), c(3.0, 0.0), c(0.0, 3.0), c(1.0, 1.0)], vec![0.4, 0.1, 0.2, 0.3])
        .unwrap();
    let nu = EmpiricalMeasure::new(vec![c(0.0, 0.0), c(-3.0, 0.0), c(0.0, 3.0), c(2.0, 2.0)], vec![0.1, 0.5, 0.1, 0.3])
        .unwrap();
    let (pts, charge) = common::pooled(&mu, &nu);
    let want = common::dbl_by_dense_lp(&pts, &charge);
    assert!((dbl_discrete(&mu, &nu).unwrap().value - want).abs() < 1e-8);
}

#[test]
fn lp_cap_is_enforced() {
    let mu = EmpiricalMeasure::uniform(vec![c(0.0, 0.0); 10]).unwrap();
    let r = discrete_distance(&mu, &mu, Metric::W1, TransportOptions { lp_cap: 99 });
    assert!(matches!(r, Err(TransportError::TooLarge { size: 100, cap: 99 })));
}

#[test]
fn self_distance_of_limit_sample_is_small() {
    let limit = LimitMeasure::new(0.5).unwrap();
    let mu = limit.sample_measure(500, &mut stream(5, Purpose::Configuration, 0)).unwrap();
    let est = distance_to_limit(
        &mu,
        &limit,
        &LimitDistanceOptions::new(Metric::BoundedLipschitz, 5000),
        &mut stream(5, Purpose::LimitSample, 0),
    )
    .unwrap();
    assert!(est.value < 0.12, "{}", est.value);
    assert_eq!(est.method, Method::Sampled);
    assert_eq!(est.samples, 5000);
    assert!(est.standard_error > 0.0);
}

#[test]
fn point_mass_w1_to_limit_is_mean_modulus() {
    let limit = LimitMeasure::new(0.5).unwrap();
    let want = limit
        .quadrature_expectation(|z| z.norm(), &[], QuadOptions::default())
        .unwrap()
        .value;
    let est = distance_to_limit(
        &point(c(0.0, 0.0)),
        &limit,
        &LimitDistanceOptions::new(Metric::W1, 20_000),
        &mut stream(6, Purpose::LimitSample, 0),
    )
    .unwrap();
    assert!(
        (est.value - want).abs() <= 3.0 * est.standard_error,
        "{} vs {want} (se {})",
        est.value,
        est.standard_error
    );
}

#[test]
fn dbl_to_limit_below_w1_on_same_sample() {
    let limit = LimitMeasure::new(0.3).unwrap();
    let mu = limit.sample_measure(40, &mut stream(7, Purpose::Configuration, 0)).unwrap().scaled(1.3);
    let run = |metric| {
        distance_to_limit(&mu, &limit, &LimitDistanceOptions::new(metric, 400), &mut stream(7, Purpose::LimitSample, 0))
            .unwrap()
            .value
    };
    assert!(run(Metric::BoundedLipschitz) <= run(Metric::W1) + 1e-12);
}

#[test]
fn too_few_reference_samples() {
    let limit = LimitMeasure::new(0.3).unwrap();
    let mu = EmpiricalMeasure::uniform(vec![c(0.0, 0.0); 5]).unwrap();
    let r = distance_to_limit(
        &mu,
        &limit,
        &LimitDistanceOptions::new(Metric::W1, 49),
        &mut stream(0, Purpose::LimitSample, 0),
    );
    assert!(matches!(r, Err(TransportError::TooFewSamples { samples: 49, required: 50 })));
}

fn measure_strategy() -> impl Strategy<Value = EmpiricalMeasure> {
    (1usize..=6, any::<u64>()).prop_map(|(k, seed)| {
        let mut rng = stream(seed, Purpose::Other(1), 0);
        let scale = rng.random_range(0.2..3.0);
        common::random_measure(k, scale, &mut rng)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn metrics_are_symmetric(mu in measure_strategy(), nu in measure_strategy()) {
        for metric in [Metric::W1, Metric::BoundedLipschitz] {
            let a = discrete_distance(&mu, &nu, metric, TransportOptions::default()).unwrap().value;
            let b = discrete_distance(&nu, &mu, metric, TransportOptions::default()).unwrap().value;
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn triangle_inequality(mu in measure_strategy(), nu in measure_strategy(), rho in measure_strategy()) {
        for metric in [Metric::W1, Metric::BoundedLipschitz] {
            let d = |x: &EmpiricalMeasure, y: &EmpiricalMeasure| {
                discrete_distance(x, y, metric, TransportOptions::default()).unwrap().value
            };
            prop_assert!(d(&mu, &rho) <= d(&mu, &nu) + d(&nu, &rho) + 1e-9);
        }
    }

    #[test]
    fn dbl_below_min_of_two_and_w1(mu in measure_strategy(), nu in measure_strategy()) {
        let w = w1_discrete(&mu, &nu).unwrap().value;
        let b = dbl_discrete(&mu, &nu).unwrap().value;
        prop_assert!(b >= 0.0);
        prop_assert!(b <= w.min(2.0) + 1e-9);
    }

    #[test]
    fn w1_is_homogeneous(mu in measure_strategy(), nu in measure_strategy(), s in 0.1f64..10.0) {
        let w = w1_discrete(&mu, &nu).unwrap().value;
        let ws = w1_discrete(&mu.scaled(s), &nu.scaled(s)).unwrap().value;
        prop_assert!((ws - s * w).abs() <= 1e-9 * (1.0 + s * w));
    }
}
