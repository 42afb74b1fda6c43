//! Spectral filtering of the non-degenerate OPO comb on the heralding arm.
//!
//! The OPO emits correlated pairs at `omega_0 ± p * delta_fsr`. Only the
//! `p = 0` pair heralds a photon in the homodyne mode; the interferential
//! filter (Lorentzian line shape) and the Fabry-Perot (Airy function)
//! suppress the rest.

use super::params::{FilterSpec, OpoParams};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Airy transmission `1 / (1 + (2F/pi)^2 sin^2(pi delta / FSR))` with `F = FSR / FWHM`.
pub fn fp_transmission(spec: &FilterSpec, detuning: f64) -> f64 {
    let coeff = (2.0 * spec.finesse() / PI).powi(2);
    let s = (PI * detuning / spec.fp_fsr).sin();
    1.0 / (1.0 + coeff * s * s)
}

/// Lorentzian interferential-filter transmission.
pub fn if_transmission(spec: &FilterSpec, detuning: f64) -> f64 {
    let u = 2.0 * detuning / spec.if_bandwidth;
    1.0 / (1.0 + u * u)
}

pub fn cascade_transmission(spec: &FilterSpec, detuning: f64) -> f64 {
    if_transmission(spec, detuning) * fp_transmission(spec, detuning)
}

/// Transmission of every comb mode `p = -p_max..=p_max`, as `(p, transmission)`.
pub fn comb_transmissions(spec: &FilterSpec, params: &OpoParams, p_max: usize) -> Vec<(i64, f64)> {
    let p_max = p_max as i64;
    (-p_max..=p_max)
        .map(|p| (p, cascade_transmission(spec, p as f64 * params.delta_fsr)))
        .collect()
}

/// Heralds caused by the unwanted comb modes `p = ±1..±p_max`, relative to
/// the degenerate `p = 0` mode. The comb is taken flat across the filter span.
pub fn cascade_rejection(spec: &FilterSpec, params: &OpoParams, p_max: usize) -> Result<f64> {
    if p_max < 1 {
        return Err(Error::param("p_max", "need at least one comb order"));
    }
    spec.validate()?;
    let modes = comb_transmissions(spec, params, p_max);
    let center = cascade_transmission(spec, 0.0);
    let unwanted: f64 = modes.iter().filter(|(p, _)| *p != 0).map(|(_, t)| t).sum();
    Ok(unwanted / center)
}

/// Rejection in dB (negative numbers mean suppression).
pub fn to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}
