//! Iterative maximum-likelihood reconstruction.
//!
//! Each step maps `rho -> R rho R / Tr(R rho R)` with
//! `R(rho) = (1/N) sum_j Pi_j / Tr(rho Pi_j)`. The undiluted map usually
//! increases the likelihood but is not guaranteed to; a step that lowers it is
//! rejected and retried with the diluted operator `(I + eps R) / (1 + eps)`,
//! halving `eps` until the likelihood no longer drops.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::projectors::Projectors;
use super::settings::TomographySettings;
use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, QuadratureSample};

/// Largest likelihood decrease still counted as an accepted step.
pub const LOGLIK_SLACK: f64 = 1e-9;
const MIN_DILUTION: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructionResult {
    pub rho: DensityMatrix,
    /// Log-likelihood of the start state followed by every accepted iterate.
    pub loglik_history: Vec<f64>,
    pub iterations_used: usize,
    pub converged: bool,
    pub diag_errors: Option<Vec<f64>>,
}

impl ReconstructionResult {
    pub fn loglik(&self) -> f64 {
        *self.loglik_history.last().expect("history starts with the initial state")
    }
}

/// `L = sum_j log Tr(rho Pi_j)`.
pub fn loglikelihood(rho: &DensityMatrix, samples: &[QuadratureSample]) -> Result<f64> {
    rho.ensure_physical()?;
    let proj = Projectors::build(samples, rho.n_max(), Default::default())?;
    Ok(proj.evaluate(rho.entries())?.0)
}

/// `R(rho)` for the given samples, one projector per sample.
pub fn r_operator(rho: &DensityMatrix, samples: &[QuadratureSample]) -> Result<DMatrix<Complex64>> {
    let proj = Projectors::build(samples, rho.n_max(), Default::default())?;
    Ok(proj.evaluate(rho.entries())?.1)
}

/// Frobenius norm of `R(rho) rho - rho`, which vanishes at the likelihood maximum.
pub fn fixed_point_residual(rho: &DensityMatrix, samples: &[QuadratureSample]) -> Result<f64> {
    let r = r_operator(rho, samples)?;
    Ok((&r * rho.entries() - rho.entries()).norm())
}

fn step(rho: &DMatrix<Complex64>, r: &DMatrix<Complex64>, dilution: Option<f64>) -> DMatrix<Complex64> {
    let m = match dilution {
        None => r.clone(),
        Some(eps) => {
            let dim = r.nrows();
            (DMatrix::identity(dim, dim) + r * Complex64::new(eps, 0.0)) / Complex64::new(1.0 + eps, 0.0)
        }
    };
    let mut next = &m * rho * &m;
    let h = (&next + next.adjoint()) * Complex64::new(0.5, 0.0);
    next = h;
    let trace: f64 = (0..next.nrows()).map(|k| next[(k, k)].re).sum();
    next / Complex64::new(trace, 0.0)
}

pub fn maxlik_reconstruct(samples: &[QuadratureSample], settings: &TomographySettings) -> Result<ReconstructionResult> {
    settings.validate()?;
    let proj = Projectors::build(samples, settings.n_max, settings.projector_grid)?;
    let mut rho = DensityMatrix::maximally_mixed(settings.n_max).entries().clone();
    let (mut ll, mut r) = proj.evaluate(&rho)?;
    let mut history = vec![ll];
    let mut dilution: Option<f64> = None;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < settings.max_iters {
        iterations += 1;
        let candidate = step(&rho, &r, dilution);
        let (ll_new, r_new) = proj.evaluate(&candidate)?;
        if ll_new < ll - LOGLIK_SLACK {
            let eps = dilution.map_or(1.0, |e| e / 2.0);
            if eps < MIN_DILUTION {
                log::debug!("dilution exhausted after {iterations} iterations; stopping at current iterate");
                converged = true;
                break;
            }
            dilution = Some(eps);
            continue;
        }
        let rel = (ll_new - ll).abs() / ll.abs().max(f64::MIN_POSITIVE);
        rho = candidate;
        ll = ll_new;
        r = r_new;
        history.push(ll);
        // Once a diluted step succeeds, try the full step again.
        dilution = None;
        if rel < settings.loglik_rel_tol {
            converged = true;
            break;
        }
    }
    let rho = DensityMatrix::from_approximate(rho)
        .map_err(|e| Error::InvalidState(format!("reconstruction left the state space: {e}")))?;
    Ok(ReconstructionResult {
        rho,
        loglik_history: history,
        iterations_used: iterations,
        converged,
        diag_errors: None,
    })
}
