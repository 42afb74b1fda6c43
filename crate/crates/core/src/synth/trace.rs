use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::mode::TemporalMode;

/// Vacuum variance of a unit-norm mode in this crate's quadrature convention.
pub const VACUUM_VARIANCE: f64 = 0.5;

/// One digitized homodyne record, in shot-noise-calibrated units.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeTrace {
    pub samples: Vec<f64>,
    pub dt: f64,
    pub theta: f64,
    pub herald_id: u64,
}

/// Additive noise in the homodyne photocurrent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    /// Electronic-noise variance as a fraction of the vacuum variance.
    pub electronic_ratio: f64,
}

impl NoiseModel {
    pub const NONE: NoiseModel = NoiseModel { electronic_ratio: 0.0 };

    /// Electronic noise 20 dB below shot noise.
    pub fn reference() -> Self {
        Self::from_clearance_db(20.0)
    }

    /// Electronic noise `db` decibels below the vacuum level.
    pub fn from_clearance_db(db: f64) -> Self {
        Self {
            electronic_ratio: 10f64.powf(-db / 10.0),
        }
    }

    pub fn vacuum_variance(&self) -> f64 {
        VACUUM_VARIANCE
    }
}

/// Embeds `x_sig` in the temporal mode on top of white vacuum noise.
///
/// White vacuum noise with variance `1/(2 dt)` per sample gives every
/// unit-norm mode variance 1/2. Its component along `f` is replaced by
/// `x_sig`, and electronic noise is added last.
pub fn synthesize_samples<R: Rng + ?Sized>(
    x_sig: f64,
    mode: &TemporalMode,
    noise: &NoiseModel,
    rng: &mut R,
) -> Vec<f64> {
    let dt = mode.dt();
    let f = mode.samples();
    let vac_sigma = (VACUUM_VARIANCE / dt).sqrt();
    let mut samples: Vec<f64> = (0..f.len())
        .map(|_| vac_sigma * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let projection: f64 = f.iter().zip(&samples).map(|(a, b)| a * b).sum::<f64>() * dt;
    let shift = x_sig - projection;
    for (s, fk) in samples.iter_mut().zip(f) {
        *s += shift * fk;
    }
    if noise.electronic_ratio > 0.0 {
        let el_sigma = (noise.electronic_ratio * VACUUM_VARIANCE / dt).sqrt();
        for s in samples.iter_mut() {
            *s += el_sigma * rng.sample::<f64, _>(StandardNormal);
        }
    }
    samples
}

/// Single trace with phase 0 and herald id 0; see [`super::run_acquisition`] for tagged sets.
pub fn synthesize_trace<R: Rng + ?Sized>(
    x_sig: f64,
    mode: &TemporalMode,
    noise: &NoiseModel,
    rng: &mut R,
) -> TimeTrace {
    TimeTrace {
        samples: synthesize_samples(x_sig, mode, noise, rng),
        dt: mode.dt(),
        theta: 0.0,
        herald_id: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::mean_variance;
    use crate::synth::mode::build_temporal_mode;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn project(samples: &[f64], g: &[f64], dt: f64) -> f64 {
        samples.iter().zip(g).map(|(a, b)| a * b).sum::<f64>() * dt
    }

    #[test]
    fn noiseless_projection_is_exact() {
        let mode = build_temporal_mode(65e6, 0.2e-9, 500).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &x in &[1.234, -0.5, 0.0, 3.3] {
            let t = synthesize_trace(x, &mode, &NoiseModel::NONE, &mut rng);
            assert!((project(&t.samples, mode.samples(), t.dt) - x).abs() < 1e-9);
        }
    }

    #[test]
    fn orthogonal_mode_sees_vacuum_plus_electronic_noise() {
        let mode = build_temporal_mode(60e6, 0.2e-9, 500).unwrap();
        let dt = mode.dt();
        // Gram-Schmidt a flat window against f
        let flat = vec![1.0; 500];
        let c = project(&flat, mode.samples(), dt);
        let mut g: Vec<f64> = flat.iter().zip(mode.samples()).map(|(a, f)| a - c * f).collect();
        let norm = project(&g, &g, dt).sqrt();
        g.iter_mut().for_each(|v| *v /= norm);
        assert!(project(&g, mode.samples(), dt).abs() < 1e-12);

        let noise = NoiseModel::reference();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 20_000;
        let mut along = Vec::with_capacity(n);
        let mut orth = Vec::with_capacity(n);
        for k in 0..n {
            // a strongly non-vacuum signal must not leak into g
            let x_sig = if k % 2 == 0 { 2.5 } else { -2.5 };
            let t = synthesize_trace(x_sig, &mode, &noise, &mut rng);
            along.push(project(&t.samples, mode.samples(), dt) - x_sig);
            orth.push(project(&t.samples, &g, dt));
        }
        let (_, v_el) = mean_variance(&along);
        let (_, v_orth) = mean_variance(&orth);
        let expect_el = 0.5 * noise.electronic_ratio;
        assert!((v_el - expect_el).abs() / expect_el < 0.05, "{v_el}");
        let expect_orth = 0.5 * (1.0 + noise.electronic_ratio);
        assert!((v_orth - expect_orth).abs() / expect_orth < 0.03, "{v_orth}");
    }

    #[test]
    fn clearance_conversion() {
        assert!((NoiseModel::reference().electronic_ratio - 0.01).abs() < 1e-15);
    }
}
