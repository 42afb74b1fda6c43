use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::DEFAULT_N_MAX;

/// How homodyne outcomes are turned into projectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProjectorGrid {
    /// One projector per sample.
    #[default]
    PerSample,
    /// Samples pooled into `n_x` quadrature bins times `n_theta` phase bins.
    Binned { n_x: usize, n_theta: usize },
}

impl ProjectorGrid {
    /// Binning used for very large sample sets.
    pub const LARGE_RUN: ProjectorGrid = ProjectorGrid::Binned { n_x: 200, n_theta: 12 };
}

/// Which estimator to run on the samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    /// Full density matrix by the iterative `R rho R` algorithm.
    #[default]
    #[serde(rename = "maxlik")]
    MaxLik,
    /// Photon-number distribution only, by expectation maximization.
    /// Valid for phase-randomized data.
    Diagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TomographySettings {
    pub n_max: usize,
    pub max_iters: usize,
    pub loglik_rel_tol: f64,
    pub projector_grid: ProjectorGrid,
    pub seed: u64,
}

impl Default for TomographySettings {
    fn default() -> Self {
        Self {
            n_max: DEFAULT_N_MAX,
            max_iters: 2000,
            loglik_rel_tol: 1e-10,
            projector_grid: ProjectorGrid::PerSample,
            seed: 0,
        }
    }
}

impl TomographySettings {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters < 1 {
            return Err(Error::param("max_iters", "must be at least 1"));
        }
        if !(self.loglik_rel_tol > 0.0) {
            return Err(Error::param("loglik_rel_tol", "must be positive"));
        }
        if let ProjectorGrid::Binned { n_x, n_theta } = self.projector_grid {
            if n_x == 0 || n_theta == 0 {
                return Err(Error::param("projector_grid", "bin counts must be positive"));
            }
        }
        Ok(())
    }
}
