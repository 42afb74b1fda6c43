//! Density-matrix reconstruction from homodyne samples.

pub mod bootstrap;
pub mod diagonal;
pub mod maxlik;
mod projectors;
pub mod settings;

pub use bootstrap::{bootstrap_errors, BootstrapErrors};
pub use diagonal::{reconstruct_diagonal, DiagonalResult};
pub use maxlik::{fixed_point_residual, loglikelihood, maxlik_reconstruct, r_operator, ReconstructionResult};
pub use settings::{Estimator, ProjectorGrid, TomographySettings};

use crate::error::Result;
use crate::fock::QuadratureSample;

/// Resample count below which bootstrap errors are flagged as unreliable.
pub const MIN_RESAMPLES: usize = 20;

/// Photon-number populations from either estimator.
pub fn reconstruct_populations(
    samples: &[QuadratureSample],
    settings: &TomographySettings,
    estimator: Estimator,
) -> Result<Vec<f64>> {
    match estimator {
        Estimator::MaxLik => Ok(maxlik_reconstruct(samples, settings)?.rho.diagonal()),
        Estimator::Diagonal => Ok(reconstruct_diagonal(samples, settings)?.populations),
    }
}

/// `W(0,0) = (1/pi) sum_n (-1)^n rho_nn`, valid for any state.
pub fn wigner_origin(populations: &[f64]) -> f64 {
    populations
        .iter()
        .enumerate()
        .map(|(n, p)| if n % 2 == 0 { *p } else { -*p })
        .sum::<f64>()
        / std::f64::consts::PI
}
