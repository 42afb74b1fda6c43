#![allow(dead_code)]

use herald_core::fock::QuadratureSample;
use herald_core::synth::{event_rng, QuadratureSampler};
use herald_core::DensityMatrix;
use rand::Rng;
use std::f64::consts::PI;

/// Direct homodyne draws at uniformly random phases, skipping trace synthesis.
pub fn draw_samples(rho: &DensityMatrix, n: usize, seed: u64) -> Vec<QuadratureSample> {
    let shared = if rho.is_diagonal(1e-14) { Some(QuadratureSampler::new(rho, 0.0).unwrap()) } else { None };
    (0..n)
        .map(|k| {
            let mut rng = event_rng(seed, k as u64);
            let theta = rng.random_range(0.0..PI);
            let x = match &shared {
                Some(s) => s.sample(&mut rng),
                None => QuadratureSampler::new(rho, theta).unwrap().sample(&mut rng),
            };
            QuadratureSample::new(x, theta)
        })
        .collect()
}

pub fn reference_like() -> DensityMatrix {
    DensityMatrix::from_diagonal(&[0.18, 0.79, 0.03]).unwrap()
}
