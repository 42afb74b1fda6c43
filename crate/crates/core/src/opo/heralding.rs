//! Photon-number model of the heralded state.
//!
//! Below threshold the signal/idler pair state has photon-number weights
//! `lambda^{2n}`. A click on an idler path of efficiency `eta_c` selects
//! `n` pairs with probability `1 - (1 - eta_c)^n`. False heralds leave the
//! signal in its unconditional, thermal-like state. Everything downstream of
//! the source is a single Bernoulli loss `eta_opo * eta_tot`.

use super::params::{ConditioningPath, OpoParams};
use crate::error::{Error, Result};
use crate::fock::{apply_loss, DensityMatrix};

/// Truncation used when a quantity should not depend on the Fock cutoff.
const WIDE_N_MAX: usize = 60;

/// Pre-loss photon-number distribution conditioned on a true herald.
pub fn conditional_populations(lambda_sq: f64, eta_c: f64, n_max: usize) -> Result<Vec<f64>> {
    if !(lambda_sq > 0.0 && lambda_sq < 1.0) {
        return Err(Error::param("lambda_sq", format!("{lambda_sq} not in (0, 1)")));
    }
    if !(eta_c > 0.0 && eta_c <= 1.0) {
        return Err(Error::param("eta_c", format!("{eta_c} not in (0, 1]")));
    }
    // Weights divided by lambda^2 so the n = 1 term stays O(1) as lambda -> 0.
    let mut pops = vec![0.0; n_max + 1];
    let mut lam_pow = 1.0;
    for (n, p) in pops.iter_mut().enumerate().skip(1) {
        *p = lam_pow * (1.0 - (1.0 - eta_c).powi(n as i32));
        lam_pow *= lambda_sq;
    }
    normalize(&mut pops);
    Ok(pops)
}

/// Unconditional (thermal-like) photon-number distribution of one arm.
pub fn unconditional_populations(lambda_sq: f64, n_max: usize) -> Vec<f64> {
    let mut pops: Vec<f64> = (0..=n_max).map(|n| (1.0 - lambda_sq) * lambda_sq.powi(n as i32)).collect();
    normalize(&mut pops);
    pops
}

fn normalize(pops: &mut [f64]) {
    let total: f64 = pops.iter().sum();
    pops.iter_mut().for_each(|p| *p /= total);
}

/// Heralded signal state after the conditioning path and all downstream losses.
pub fn heralded_state(
    params: &OpoParams,
    path: &ConditioningPath,
    eta_opo: f64,
    eta_tot: f64,
    n_max: usize,
) -> Result<DensityMatrix> {
    params.validate()?;
    path.validate()?;
    let lambda_sq = params.lambda_sq();
    let cond = conditional_populations(lambda_sq, path.eta_c(), n_max)?;
    let uncond = unconditional_populations(lambda_sq, n_max);
    let ratio = path.false_herald_ratio();
    let w_false = if ratio.is_infinite() { 1.0 } else { ratio / (1.0 + ratio) };
    let mixed: Vec<f64> = cond
        .iter()
        .zip(&uncond)
        .map(|(c, u)| (1.0 - w_false) * c + w_false * u)
        .collect();
    let rho = DensityMatrix::from_diagonal(&mixed)?;
    apply_loss(&rho, eta_opo * eta_tot)
}

/// Two-photon share `rho_22 / sum_{n>=1} rho_nn` of the conditional state
/// before detection loss, with `lambda^2 = pump_ratio`.
pub fn two_photon_fraction(pump_ratio: f64, eta_c: f64) -> Result<f64> {
    let pops = conditional_populations(pump_ratio, eta_c, WIDE_N_MAX)?;
    Ok(pops[2] / pops[1..].iter().sum::<f64>())
}
