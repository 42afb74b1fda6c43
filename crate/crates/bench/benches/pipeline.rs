use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use herald_core::extract::extract_all;
use herald_core::fock::{apply_loss, invert_loss, wigner_grid};
use herald_core::synth::{build_temporal_mode, event_rng, run_acquisition, NoiseModel, PhaseSchedule, QuadratureSampler};
use herald_core::tomography::{maxlik_reconstruct, reconstruct_diagonal, TomographySettings};
use herald_core::{DensityMatrix, QuadratureSample};

fn heralded() -> DensityMatrix {
    DensityMatrix::from_diagonal(&[0.18, 0.79, 0.03]).unwrap()
}

fn samples(n: usize) -> Vec<QuadratureSample> {
    let sampler = QuadratureSampler::new(&heralded(), 0.0).unwrap();
    (0..n as u64)
        .map(|k| {
            let mut rng = event_rng(7, k);
            let theta = std::f64::consts::PI * k as f64 / n as f64;
            QuadratureSample::new(sampler.sample(&mut rng), theta)
        })
        .collect()
}

fn fock(c: &mut Criterion) {
    let rho = heralded().with_n_max(10).unwrap();
    c.bench_function("apply_loss n_max=10", |b| b.iter(|| apply_loss(black_box(&rho), 0.85).unwrap()));
    c.bench_function("invert_loss n_max=10", |b| b.iter(|| invert_loss(black_box(&rho), 0.85).unwrap()));
    c.bench_function("wigner_grid 81x81", |b| {
        b.iter(|| wigner_grid(black_box(&rho), (-4.0, 4.0), (-4.0, 4.0), 81).unwrap())
    });
}

fn sampling(c: &mut Criterion) {
    let rho = heralded();
    c.bench_function("sampler build", |b| b.iter(|| QuadratureSampler::new(black_box(&rho), 0.3).unwrap()));
    let sampler = QuadratureSampler::new(&rho, 0.0).unwrap();
    let mut rng = event_rng(1, 0);
    c.bench_function("sampler draw", |b| b.iter(|| sampler.sample(&mut rng)));
}

fn traces(c: &mut Criterion) {
    let mode = build_temporal_mode(60e6, 0.2e-9, 500).unwrap();
    let noise = NoiseModel::reference();
    let mut group = c.benchmark_group("acquisition");
    group.sample_size(10);
    group.bench_function("synthesize 5000 traces", |b| {
        b.iter(|| run_acquisition(&heralded(), 5000, &mode, &noise, PhaseSchedule::default(), 3).unwrap())
    });
    let acq = run_acquisition(&heralded(), 5000, &mode, &noise, PhaseSchedule::default(), 3).unwrap();
    group.bench_function("extract 5000 traces", |b| b.iter(|| extract_all(black_box(&acq.traces), &mode).unwrap()));
    group.finish();
}

fn tomography(c: &mut Criterion) {
    let data = samples(10_000);
    let mut group = c.benchmark_group("tomography");
    group.sample_size(10);
    for n_max in [4usize, 8] {
        let settings = TomographySettings { n_max, max_iters: 50, loglik_rel_tol: 1e-300, ..Default::default() };
        group.bench_with_input(BenchmarkId::new("maxlik 50 iters", n_max), &settings, |b, s| {
            b.iter(|| maxlik_reconstruct(black_box(&data), s).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("diagonal 50 iters", n_max), &settings, |b, s| {
            b.iter(|| reconstruct_diagonal(black_box(&data), s).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, fock, sampling, traces, tomography);
criterion_main!(benches);
