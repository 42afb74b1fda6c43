//! Nonparametric bootstrap: resample with replacement, reconstruct, and take
//! the spread of each population.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::settings::{Estimator, TomographySettings};
use super::{reconstruct_populations, MIN_RESAMPLES};
use crate::error::{Error, Result};
use crate::fock::QuadratureSample;
use crate::synth::event_rng;

#[derive(Debug, Clone, Serialize)]
pub struct BootstrapErrors {
    pub n_resamples: usize,
    pub mean: Vec<f64>,
    /// Standard deviation of each `rho_nn` across resamples.
    pub std_errors: Vec<f64>,
    pub warnings: Vec<String>,
}

pub fn bootstrap_errors(
    samples: &[QuadratureSample],
    settings: &TomographySettings,
    n_resamples: usize,
    estimator: Estimator,
) -> Result<BootstrapErrors> {
    settings.validate()?;
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if n_resamples == 0 {
        return Err(Error::param("n_resamples", "need at least one resample"));
    }
    let mut warnings = Vec::new();
    if n_resamples < MIN_RESAMPLES {
        warnings.push(format!(
            "only {n_resamples} resamples; at least {MIN_RESAMPLES} are needed for a stable error estimate"
        ));
    }
    let runs: Vec<Vec<f64>> = (0..n_resamples)
        .into_par_iter()
        .map(|r| {
            let mut rng = event_rng(settings.seed, r as u64);
            let draw: Vec<QuadratureSample> =
                (0..samples.len()).map(|_| samples[rng.random_range(0..samples.len())]).collect();
            reconstruct_populations(&draw, settings, estimator)
        })
        .collect::<Result<_>>()?;
    let dim = settings.n_max + 1;
    let nr = n_resamples as f64;
    let mean: Vec<f64> = (0..dim).map(|k| runs.iter().map(|p| p[k]).sum::<f64>() / nr).collect();
    let std_errors: Vec<f64> = if n_resamples < 2 {
        warnings.push("a single resample has no spread; standard errors set to zero".into());
        vec![0.0; dim]
    } else {
        (0..dim)
            .map(|k| (runs.iter().map(|p| (p[k] - mean[k]).powi(2)).sum::<f64>() / (nr - 1.0)).sqrt())
            .collect()
    };
    for w in &warnings {
        log::warn!("bootstrap: {w}");
    }
    Ok(BootstrapErrors {
        n_resamples,
        mean,
        std_errors,
        warnings,
    })
}
