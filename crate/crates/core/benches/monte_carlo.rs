use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use qradar::channel::{hypothesis_h0, hypothesis_h1, TargetParams};
use qradar::detector::{
    helstrom_measurement, roc_sweep_with, run_empirical, simulate_trials_with, Hypothesis,
};
use qradar::metrics::Priors;
use qradar::Execution;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn trials(c: &mut Criterion) {
    let rho0 = hypothesis_h0(0.5).unwrap();
    let rho1 = hypothesis_h1(&TargetParams::new(PI, 0.5, 0.5).unwrap()).unwrap();
    let m = helstrom_measurement(&rho0, &rho1, Priors::EQUAL).unwrap();

    let mut group = c.benchmark_group("simulate_trials");
    group.sample_size(20);
    for n in [1u64 << 16, 1 << 20, 1 << 23] {
        group.throughput(Throughput::Elements(n));
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| {
                    simulate_trials_with(&m, &rho1, Hypothesis::H1, black_box(n), 7, exec, None)
                        .unwrap()
                })
            });
        }
    }
    group.finish();

    let mut group = c.benchmark_group("run_empirical");
    group.sample_size(10);
    let n = 1u64 << 22;
    group.throughput(Throughput::Elements(n));
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                run_empirical(&rho0, &rho1, Priors::EQUAL, black_box(n), 7, exec, None).unwrap()
            })
        });
    }
    group.finish();
}

fn roc(c: &mut Criterion) {
    let rho0 = hypothesis_h0(0.3).unwrap();
    let rho1 = hypothesis_h1(&TargetParams::new(2.0, 0.7, 0.3).unwrap()).unwrap();
    let mut group = c.benchmark_group("roc_sweep");
    for k in [64usize, 1024] {
        let thresholds: Vec<f64> = (0..k).map(|i| 8.0 * i as f64 / k as f64).collect();
        group.throughput(Throughput::Elements(k as u64));
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, k), &thresholds, |b, ts| {
                b.iter(|| roc_sweep_with(&rho0, &rho1, black_box(ts), exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, trials, roc);
criterion_main!(benches);
