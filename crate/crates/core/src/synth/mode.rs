use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Minimum share of `∫ f^2` the sampling window must capture.
pub const MIN_CAPTURED: f64 = 0.999;

/// Continuous two-sided exponential mode `sqrt(pi gamma) exp(-pi gamma |t|)`.
pub fn mode_amplitude(gamma: f64, t: f64) -> f64 {
    (PI * gamma).sqrt() * (-PI * gamma * t.abs()).exp()
}

/// Discretized temporal mode used as the matched filter.
///
/// Samples sit at `t_k = (k - (n-1)/2) dt`, symmetric about the window
/// center, and are rescaled so that `sum f_k^2 dt = 1` exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TemporalMode {
    gamma: f64,
    dt: f64,
    #[serde(skip)]
    f: Vec<f64>,
}

pub fn build_temporal_mode(gamma: f64, dt: f64, n_samples: usize) -> Result<TemporalMode> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::param("gamma", format!("{gamma} must be positive")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param("dt", format!("{dt} must be positive")));
    }
    let captured = 1.0 - (-PI * gamma * dt * n_samples as f64).exp();
    if captured < MIN_CAPTURED {
        let min_samples = ((-(1.0 - MIN_CAPTURED).ln()) / (PI * gamma * dt)).ceil() as usize;
        return Err(Error::WindowTooShort {
            n_samples,
            min_samples,
            captured,
        });
    }
    let center = (n_samples as f64 - 1.0) / 2.0;
    let mut f: Vec<f64> = (0..n_samples)
        .map(|k| mode_amplitude(gamma, (k as f64 - center) * dt))
        .collect();
    let norm = (f.iter().map(|v| v * v).sum::<f64>() * dt).sqrt();
    f.iter_mut().for_each(|v| *v /= norm);
    Ok(TemporalMode { gamma, dt, f })
}

impl TemporalMode {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_samples(&self) -> usize {
        self.f.len()
    }

    pub fn samples(&self) -> &[f64] {
        &self.f
    }

    pub fn times(&self) -> Vec<f64> {
        let center = (self.f.len() as f64 - 1.0) / 2.0;
        (0..self.f.len()).map(|k| (k as f64 - center) * self.dt).collect()
    }

    /// Discrete inner product `sum f_k g_k dt` with another mode on the same grid.
    pub fn overlap(&self, other: &TemporalMode) -> Result<f64> {
        if self.f.len() != other.f.len() || !same_dt(self.dt, other.dt) {
            return Err(Error::Mismatch("modes sampled on different grids".into()));
        }
        Ok(self.f.iter().zip(&other.f).map(|(a, b)| a * b).sum::<f64>() * self.dt)
    }

    /// Full width at half maximum of `|f(t)|^2`, `ln 2 / (pi gamma)`.
    pub fn intensity_fwhm(&self) -> f64 {
        std::f64::consts::LN_2 / (PI * self.gamma)
    }
}

/// Overlap `∫ f_a f_b dt` of two continuous two-sided exponential modes.
pub fn analytic_overlap(gamma_a: f64, gamma_b: f64) -> f64 {
    2.0 * (gamma_a * gamma_b).sqrt() / (gamma_a + gamma_b)
}

pub(crate) fn same_dt(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}
