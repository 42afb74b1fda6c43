use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::file::{TraceSet, FLAG_SHOT_NOISE_UNITS};
use super::mode::TemporalMode;
use super::sampler::QuadratureSampler;
use super::trace::{synthesize_samples, NoiseModel};
use crate::error::{Error, Result};
use crate::fock::DensityMatrix;

pub const DEFAULT_EVENTS: usize = 50_000;

/// How the local-oscillator phase advances from one event to the next.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhaseSchedule {
    /// `theta_k = pi * (k mod period) / period`.
    LinearRamp { period: usize },
    /// Independent uniform phases in `[0, pi)`.
    UniformRandom,
}

impl Default for PhaseSchedule {
    fn default() -> Self {
        PhaseSchedule::LinearRamp { period: 100 }
    }
}

impl PhaseSchedule {
    fn phase<R: Rng + ?Sized>(&self, k: u64, rng: &mut R) -> f64 {
        match *self {
            PhaseSchedule::LinearRamp { period } => PI * (k % period as u64) as f64 / period as f64,
            PhaseSchedule::UniformRandom => PI * rng.random::<f64>(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            PhaseSchedule::LinearRamp { period: 0 } => Err(Error::param("period", "must be positive")),
            _ => Ok(()),
        }
    }
}

/// Independent per-event generator derived from the master seed and herald id,
/// so serial and parallel runs produce identical streams.
pub fn event_rng(master_seed: u64, herald_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(herald_id);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcquisitionManifest {
    pub n_events: usize,
    pub n_samples: usize,
    pub dt: f64,
    pub gamma: f64,
    pub noise: NoiseModel,
    pub schedule: PhaseSchedule,
    pub seed: u64,
    pub source: DensityMatrix,
}

#[derive(Debug, Clone)]
pub struct Acquisition {
    pub traces: TraceSet,
    pub manifest: AcquisitionManifest,
}

enum Sampling {
    Shared(QuadratureSampler),
    PerEvent,
}

/// Synthesizes `n_events` heralded traces of `source`.
pub fn run_acquisition(
    source: &DensityMatrix,
    n_events: usize,
    mode: &TemporalMode,
    noise: &NoiseModel,
    schedule: PhaseSchedule,
    seed: u64,
) -> Result<Acquisition> {
    source.ensure_physical()?;
    schedule.validate()?;
    if !(noise.electronic_ratio >= 0.0) {
        return Err(Error::param("electronic_ratio", "must be non-negative"));
    }
    let n_samples = mode.n_samples();
    // Photon-number-diagonal states have the same distribution at every phase.
    let sampling = if source.is_diagonal(1e-14) {
        Sampling::Shared(QuadratureSampler::new(source, 0.0)?)
    } else {
        Sampling::PerEvent
    };
    let mut data = vec![0f32; n_events * n_samples];
    let mut thetas = vec![0f64; n_events];
    if n_samples > 0 {
        data.par_chunks_mut(n_samples)
            .zip(thetas.par_iter_mut())
            .enumerate()
            .try_for_each(|(k, (row, theta))| -> Result<()> {
                let mut rng = event_rng(seed, k as u64);
                *theta = schedule.phase(k as u64, &mut rng);
                let x_sig = match &sampling {
                    Sampling::Shared(s) => s.sample(&mut rng),
                    Sampling::PerEvent => QuadratureSampler::new(source, *theta)?.sample(&mut rng),
                };
                let samples = synthesize_samples(x_sig, mode, noise, &mut rng);
                for (dst, src) in row.iter_mut().zip(samples) {
                    *dst = src as f32;
                }
                Ok(())
            })?;
    }
    let traces = TraceSet {
        dt: mode.dt(),
        n_samples,
        flags: FLAG_SHOT_NOISE_UNITS,
        herald_ids: (0..n_events as u64).collect(),
        thetas,
        data,
    };
    Ok(Acquisition {
        traces,
        manifest: AcquisitionManifest {
            n_events,
            n_samples,
            dt: mode.dt(),
            gamma: mode.gamma(),
            noise: *noise,
            schedule,
            seed,
            source: source.clone(),
        },
    })
}
