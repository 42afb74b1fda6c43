//! The simulated source: heralded state plus how the detection budget is split
//! between optical loss and synthesized electronic noise.

use anyhow::anyhow;
use herald_core::opo::{
    cascade_rejection, escape_efficiency, heralded_state, total_detection_efficiency, ConditioningPath,
};
use herald_core::DensityMatrix;
use serde::Serialize;

use crate::config::Config;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize)]
pub struct SourceModel {
    pub eta_opo: f64,
    pub eta_tot: f64,
    /// Efficiency equivalent of the synthesized electronic noise after
    /// shot-noise calibration, `1 / (1 + ratio)`.
    pub eta_electronic: f64,
    /// Loss applied to the state itself; `eta_optical * eta_electronic = eta_opo * eta_tot`.
    pub eta_optical: f64,
    pub conditioning: ConditioningPath,
    pub state: DensityMatrix,
}

pub fn source_model(cfg: &Config) -> CliResult<SourceModel> {
    let eta_opo = escape_efficiency(cfg.opo.t_out, cfg.opo.l_intra)?;
    let eta_tot = total_detection_efficiency(&cfg.budget);
    let noise = cfg.acquisition.noise();
    let eta_electronic = 1.0 / (1.0 + noise.electronic_ratio);
    if eta_electronic < cfg.budget.eta_noise {
        return Err(CliError::usage(anyhow!(
            "electronic noise ({:.2} dB clearance) costs more than budget.eta_noise = {}",
            cfg.acquisition.electronic_clearance_db.unwrap_or(f64::INFINITY),
            cfg.budget.eta_noise
        )));
    }
    let mut conditioning = cfg.conditioning;
    if cfg.acquisition.filter_leakage {
        conditioning.leakage = cascade_rejection(&cfg.filters, &cfg.opo, cfg.acquisition.comb_orders)?;
    }
    let eta_det = eta_tot / eta_electronic;
    let state = heralded_state(&cfg.opo, &conditioning, eta_opo, eta_det, cfg.acquisition.n_max)?;
    Ok(SourceModel {
        eta_opo,
        eta_tot,
        eta_electronic,
        eta_optical: eta_opo * eta_det,
        conditioning,
        state,
    })
}
