//! Bernoulli photon-loss channel and its inverse at fixed truncation.
//!
//! `rho'_{m,n} = sum_k sqrt(C(m+k,k) C(n+k,k)) eta^{(m+n)/2} (1-eta)^k rho_{m+k,n+k}`.
//! The channel maps each diagonal band `n - m = d` onto itself through an upper
//! triangular matrix, so inversion is a back substitution per band.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::state::DensityMatrix;
use crate::error::{Error, Result};
use crate::numeric::binomial;

fn check_efficiency(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::param("eta", format!("{eta} outside [0, 1]")));
    }
    Ok(())
}

/// Coefficient linking `rho_{m+k, m+d+k}` to `rho'_{m, m+d}`.
fn band_coefficient(m: usize, d: usize, k: usize, eta: f64) -> f64 {
    let n = m + d;
    let amp = (binomial(m + k, k) * binomial(n + k, k)).sqrt();
    amp * eta.powf(0.5 * (m + n) as f64) * (1.0 - eta).powi(k as i32)
}

pub fn apply_loss(rho: &DensityMatrix, eta: f64) -> Result<DensityMatrix> {
    check_efficiency(eta)?;
    let dim = rho.dim();
    let mut out = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for d in 0..dim {
        for m in 0..dim - d {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..dim - d - m {
                let c = band_coefficient(m, d, k, eta);
                if c != 0.0 {
                    acc += rho.element(m + k, m + d + k) * c;
                }
            }
            out[(m, m + d)] = acc;
            out[(m + d, m)] = acc.conj();
        }
    }
    for k in 0..dim {
        out[(k, k)].im = 0.0;
    }
    if rho.is_physical() {
        DensityMatrix::from_approximate(out)
    } else {
        DensityMatrix::from_hermitian(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum InversionStatus {
    Physical,
    /// The raw inverse has negative eigenvalues; it is returned unprojected.
    NotPositive { min_eigenvalue: f64, psd_distance: f64 },
}

#[derive(Debug, Clone)]
pub struct LossInversion {
    /// Raw inverse; may fail positivity for noisy inputs.
    pub state: DensityMatrix,
    pub status: InversionStatus,
}

impl LossInversion {
    pub fn is_physical(&self) -> bool {
        matches!(self.status, InversionStatus::Physical)
    }
}

/// Undoes [`apply_loss`] by solving the triangular system band by band.
pub fn invert_loss(rho: &DensityMatrix, eta: f64) -> Result<LossInversion> {
    if eta == 0.0 {
        return Err(Error::NonInvertibleLoss(eta));
    }
    check_efficiency(eta)?;
    let dim = rho.dim();
    let mut out = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for d in 0..dim {
        for m in (0..dim - d).rev() {
            let mut rhs = rho.element(m, m + d);
            for k in 1..dim - d - m {
                rhs -= out[(m + k, m + d + k)] * band_coefficient(m, d, k, eta);
            }
            let v = rhs / band_coefficient(m, d, 0, eta);
            out[(m, m + d)] = v;
            out[(m + d, m)] = v.conj();
        }
    }
    for k in 0..dim {
        out[(k, k)].im = 0.0;
    }
    let state = DensityMatrix::from_hermitian(out)?;
    let status = if state.is_physical() {
        InversionStatus::Physical
    } else {
        let status = InversionStatus::NotPositive {
            min_eigenvalue: state.min_eigenvalue(),
            psd_distance: state.psd_distance(),
        };
        log::warn!("loss inversion at eta = {eta} produced a non-positive matrix: {status:?}");
        status
    };
    Ok(LossInversion { state, status })
}
