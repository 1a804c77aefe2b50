use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use holokernel::bundles::{assemble_bundle, fixtures};
use holokernel::fueter::{FueterOperator, QuaternionField};
use holokernel::holonomy::standard::omega0;
use holokernel::holonomy::{calibration_sampling, taming_check, SamplingConfig, Spin7Model};
use holokernel::par::stream_rng;
use holokernel::Execution;
use num::complex::Complex64;
use rand::Rng;
use std::hint::black_box;

const STRATEGIES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn sampling(c: &mut Criterion) {
    let s7 = Spin7Model::standard();
    let omega = omega0();
    let mut group = c.benchmark_group("holonomy_sampling");
    group.sample_size(10);
    for (name, execution) in STRATEGIES {
        let cfg = SamplingConfig {
            samples: 1000,
            seed: 1,
            execution,
        };
        group.bench_with_input(BenchmarkId::new("taming", name), &cfg, |b, cfg| {
            b.iter(|| black_box(taming_check(&omega, &s7, cfg).unwrap().min_margin))
        });
        let cfg = SamplingConfig { samples: 10_000, ..cfg };
        group.bench_with_input(BenchmarkId::new("calibration", name), &cfg, |b, cfg| {
            b.iter(|| black_box(calibration_sampling(&s7, cfg, 0, 1e-9).max_ratio))
        });
    }
    group.finish();
}

fn bundles(c: &mut Criterion) {
    let atlas = fixtures::dense_wall_atlas();
    let mut rng = stream_rng(2, 0);
    let samples: Vec<Vec<Complex64>> = (0..200)
        .map(|_| {
            (0..2)
                .map(|_| Complex64::new(rng.random_range(0.0..2.0), rng.random_range(-3.0..3.0)))
                .collect()
        })
        .collect();
    let mut group = c.benchmark_group("assemble_bundle");
    group.sample_size(10);
    for (name, execution) in STRATEGIES {
        group.bench_function(name, |b| {
            b.iter(|| black_box(assemble_bundle(&atlas, &samples, execution).unwrap()))
        });
    }
    group.finish();
}

fn fueter(c: &mut Criterion) {
    let f = QuaternionField::random(41, 3).unwrap();
    let mut group = c.benchmark_group("fueter_apply");
    for (name, execution) in STRATEGIES {
        let op = FueterOperator {
            execution,
            ..Default::default()
        };
        group.bench_function(name, |b| b.iter(|| black_box(op.apply(&f))));
    }
    group.finish();
}

criterion_group!(benches, sampling, bundles, fueter);
criterion_main!(benches);
