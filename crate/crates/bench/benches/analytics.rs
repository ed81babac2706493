use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use zealot_core::special_fn::{log_gamma, reg_inc_beta};
use zealot_core::stationary::{beta_binomial_pmf, majority_accuracy_networked};
use zealot_core::verify::{check_integral_identities, proposition_grid_scan, GridScan};
use zealot_core::{PopulationSize, ShapePair};

fn special_functions(c: &mut Criterion) {
    let s = ShapePair::new(3.7, 2.2).unwrap();
    c.bench_function("log_gamma", |b| b.iter(|| log_gamma(black_box(17.3))));
    c.bench_function("reg_inc_beta", |b| {
        b.iter(|| reg_inc_beta(black_box(0.5), black_box(s)))
    });
}

fn stationary_law(c: &mut Criterion) {
    let s = ShapePair::new(3.0, 2.0).unwrap();
    let mut group = c.benchmark_group("majority_accuracy");
    for n in [100usize, 10_000, 100_000] {
        let size = PopulationSize::new(n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &size, |b, &size| {
            b.iter(|| majority_accuracy_networked(size, s))
        });
    }
    group.finish();
    let size = PopulationSize::new(1_000).unwrap();
    c.bench_function("pmf_n1000", |b| b.iter(|| beta_binomial_pmf(size, s)));
}

fn verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    group.bench_function("grid_scan_default", |b| {
        b.iter(|| proposition_grid_scan(&GridScan::default()))
    });
    let s = ShapePair::new(2.5, 1.5).unwrap();
    group.bench_function("integral_chain", |b| b.iter(|| check_integral_identities(s, 1e-12)));
    group.finish();
}

criterion_group!(benches, special_functions, stationary_law, verification);
criterion_main!(benches);
