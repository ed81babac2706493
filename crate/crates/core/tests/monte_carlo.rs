use zealot_core::dynamics::{
    estimate_accuracy, relaxation_steps, run_to_stationarity, NetworkSpec, SamplingPlan, SimulationConfig,
};
use zealot_core::stationary::beta_binomial_pmf;
use zealot_core::{PopulationSize, ShapePair};

fn exact(n: usize, a: usize, b: usize) -> Vec<f64> {
    let shape = ShapePair::new(a as f64, b as f64).unwrap();
    beta_binomial_pmf(PopulationSize::new(n).unwrap(), shape)
        .unwrap()
        .probs()
}

#[test]
fn default_plan_within_tv_envelope() {
    for n in [2usize, 10, 50] {
        for a in 1..=4 {
            for b in 1..=4 {
                let spec = NetworkSpec::complete(n, a, b);
                let plan = SamplingPlan::default_for(&spec);
                let seed = (n * 100 + a * 10 + b) as u64;
                let report = run_to_stationarity(&spec, &SimulationConfig::new(plan, seed)).unwrap();
                let tv = report.total_variation(&exact(n, a, b));
                let envelope = 4.0 * ((n + 1) as f64 / report.samples as f64).sqrt();
                assert!(tv < envelope, "n={n} α={a} β={b}: tv {tv} ≥ {envelope}");
            }
        }
    }
}

#[test]
fn uniform_case_passes_chi_square() {
    let (n, a, b) = (2usize, 1, 1);
    // ten relaxation times between samples, so samples are close to independent
    let thinning = (10.0 * relaxation_steps(n, a, b)).ceil() as u64;
    let plan = SamplingPlan {
        burn_in: 1_000,
        samples: 1_000_000,
        thinning,
    };
    let report = run_to_stationarity(&NetworkSpec::complete(n, a, b), &SimulationConfig::new(plan, 11)).unwrap();
    let expected = report.samples as f64 / (n + 1) as f64;
    let chi2: f64 = report
        .counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    // upper 0.001 quantile of chi-square with 2 degrees of freedom
    assert!(
        chi2 < 13.815_510_557_964_274,
        "chi2 = {chi2}, counts {:?}",
        report.counts
    );
    for &p in &report.empirical_pmf {
        let se = (p * (1.0 - p) / report.samples as f64).sqrt();
        assert!((p - 1.0 / 3.0).abs() < 5.0 * se);
    }
}

#[test]
fn single_voter_accuracy_is_signal_probability() {
    let spec = NetworkSpec::complete(1, 2, 1);
    let plan = SamplingPlan {
        burn_in: 100,
        samples: 200_000,
        thinning: 1,
    };
    let est = estimate_accuracy(&spec, &SimulationConfig::new(plan, 3)).unwrap();
    assert!((est.analytic.unwrap().value() - 2.0 / 3.0).abs() < 1e-14);
    // with one voter the chain mixes slowly relative to a single step
    assert!(
        (est.estimate.value() - 2.0 / 3.0).abs() < 0.01,
        "{}",
        est.estimate.value()
    );
}

#[test]
fn symmetric_zealots_give_even_odds() {
    let spec = NetworkSpec::complete(11, 2, 2);
    let plan = SamplingPlan {
        thinning: relaxation_steps(11, 2, 2).ceil() as u64 * 2,
        ..SamplingPlan::default_for(&spec)
    };
    let est = estimate_accuracy(&spec, &SimulationConfig::new(plan, 5)).unwrap();
    assert!((est.estimate.value() - 0.5).abs() < 4.0 * est.std_error, "{est:?}");
}

#[test]
fn replicas_are_deterministic_and_merge_by_counts() {
    let spec = NetworkSpec::complete(10, 2, 3);
    let plan = SamplingPlan {
        burn_in: 5_000,
        samples: 20_000,
        thinning: 10,
    };
    let single = run_to_stationarity(&spec, &SimulationConfig::new(plan, 9)).unwrap();
    let one = run_to_stationarity(&spec, &SimulationConfig::new(plan, 9).with_replicas(1)).unwrap();
    assert_eq!(single, one);

    let four = SimulationConfig::new(plan, 9).with_replicas(4);
    let a = run_to_stationarity(&spec, &four).unwrap();
    let b = run_to_stationarity(&spec, &four).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.samples, 80_000);
    assert_eq!(a.counts.iter().sum::<u64>(), 80_000);
    assert_ne!(a.counts, single.counts.iter().map(|c| c * 4).collect::<Vec<_>>());
    assert!(a.total_variation(&exact(10, 2, 3)) < 4.0 * (11.0f64 / 80_000.0).sqrt());
}
