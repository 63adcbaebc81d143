//! Parallel against sequential fate sweeps: a 64-point σ-sweep of the P2
//! orbit and a 64-point label sweep of Q1_OUT seeds.

use std::f64::consts::FRAC_PI_2;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sepvar::par::Execution;
use sepvar::shooting::{sweep, Origin, Parameter, Shooting};
use sepvar::ModelParams;

const POINTS: usize = 64;

fn bench_sweeps(c: &mut Criterion) {
    let p = ModelParams::new(2.0, 4.0, 0.5).expect("valid parameters");
    let sigmas: Vec<f64> = (0..POINTS).map(|k| 0.05 + 1.45 * k as f64 / (POINTS - 1) as f64).collect();
    let p2 = Shooting::new(Origin::P2E3, p);
    let angles: Vec<f64> = (1..=POINTS).map(|k| FRAC_PI_2 * k as f64 / (POINTS + 1) as f64).collect();
    let q1 = Shooting::new(Origin::Q1Out { phi: 0.5 }, p.with_sigma(0.2).expect("valid sigma"));

    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for (name, exec) in [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)] {
        let setup = Shooting { execution: exec, ..p2 };
        group.bench_with_input(BenchmarkId::new("p2_sigma", name), &sigmas, |b, grid| {
            b.iter(|| sweep(Parameter::Sigma, black_box(grid), &setup).expect("sweep runs"))
        });
        let setup = Shooting { execution: exec, ..q1 };
        group.bench_with_input(BenchmarkId::new("q1_label", name), &angles, |b, grid| {
            b.iter(|| sweep(Parameter::D, black_box(grid), &setup).expect("sweep runs"))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sweeps);
criterion_main!(benches);
