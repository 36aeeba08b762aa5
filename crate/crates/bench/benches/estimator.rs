use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nullprop_bench::fixture;
use nullprop_core::{
    calibrate_beta, estimate_lambda, weighted_sup_stat, BoundingFunction, CalibrationRequest,
    EstimateConfig, Interval,
};

fn sup_stat(c: &mut Criterion) {
    let mut group = c.benchmark_group("weighted_sup_stat");
    for n in [1_000, 10_000, 100_000] {
        let sample = fixture(n, 0, 1);
        let interval = Interval::truncated(n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &sample, |b, s| {
            b.iter(|| weighted_sup_stat(black_box(s.values()), BoundingFunction::Stddev, interval))
        });
    }
    group.finish();
}

fn estimate(c: &mut Criterion) {
    let mut group = c.benchmark_group("estimate_lambda");
    for n in [1_000, 100_000] {
        let sample = fixture(n, n / 50, 2);
        for delta in BoundingFunction::ALL {
            let config = EstimateConfig::analytic(delta, 0.05);
            group.bench_with_input(BenchmarkId::new(delta.as_str(), n), &sample, |b, s| {
                b.iter(|| estimate_lambda(black_box(s), &config).unwrap())
            });
        }
    }
    group.finish();
}

fn calibrate(c: &mut Criterion) {
    let req = CalibrationRequest {
        n: 1000,
        delta: BoundingFunction::Stddev,
        interval: Interval::truncated(1000).unwrap(),
        alpha: 0.05,
        replicates: 200,
        seed: 3,
    };
    let mut group = c.benchmark_group("calibrate_beta");
    group.sample_size(20);
    group.bench_function("n1000_r200", |b| {
        b.iter(|| calibrate_beta(black_box(&req)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, sup_stat, estimate, calibrate);
criterion_main!(benches);
