use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use herald_core::fock::{fidelity_with_fock, invert_loss, wigner, wigner_grid, InversionStatus};
use herald_core::tomography::{
    bootstrap_errors, maxlik_reconstruct, reconstruct_diagonal, wigner_origin, BootstrapErrors, Estimator,
};
use herald_core::{DensityMatrix, QuadratureSample};
use serde::Serialize;

use crate::config::Config;
use crate::error::{CliResult, Context};
use crate::report::{read_quadratures, write_json, write_loglik, Envelope};

pub const RHO_FILE: &str = "rho.json";
pub const LOGLIK_FILE: &str = "loglik.csv";
pub const ERRORS_FILE: &str = "errors.json";
pub const WIGNER_FILE: &str = "wigner.csv";
pub const REPORT_FILE: &str = "reconstruct.json";

/// Truncation used for the renormalized corrected diagonal.
const CORRECTED_SUPPORT: usize = 2;

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub estimator: Estimator,
    pub rho: DensityMatrix,
    pub loglik_history: Vec<f64>,
    pub iterations_used: usize,
    pub converged: bool,
    pub errors: Option<BootstrapErrors>,
}

impl Reconstruction {
    pub fn populations(&self) -> Vec<f64> {
        self.rho.diagonal()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Correction {
    pub eta: f64,
    /// Diagonal of the raw inverse.
    pub populations: Vec<f64>,
    /// `rho_00..rho_22` rescaled to unit sum.
    pub renormalized: Vec<f64>,
    pub fidelity: f64,
    pub wigner_origin: f64,
    pub inversion: InversionStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct StateSummary {
    pub estimator: Estimator,
    pub n_samples: usize,
    pub populations: Vec<f64>,
    /// Single-photon fidelity `rho_11`.
    pub fidelity: f64,
    pub wigner_origin: f64,
    pub iterations_used: usize,
    pub converged: bool,
    pub loglik: f64,
    pub std_errors: Option<Vec<f64>>,
    pub corrected: Option<Correction>,
}

pub fn reconstruct(cfg: &Config, samples: &[QuadratureSample]) -> CliResult<Reconstruction> {
    let settings = cfg.tomography.settings(cfg.seed);
    let estimator = cfg.tomography.estimator;
    let (rho, loglik_history, iterations_used, converged) = match estimator {
        Estimator::MaxLik => {
            let r = maxlik_reconstruct(samples, &settings)?;
            (r.rho, r.loglik_history, r.iterations_used, r.converged)
        }
        Estimator::Diagonal => {
            let r = reconstruct_diagonal(samples, &settings)?;
            (DensityMatrix::from_diagonal(&r.populations)?, r.loglik_history, r.iterations_used, r.converged)
        }
    };
    if !converged {
        log::warn!("reconstruction stopped after {iterations_used} iterations without converging");
    }
    let errors = match cfg.tomography.bootstrap_resamples {
        0 => None,
        n => {
            let e = bootstrap_errors(samples, &settings, n, cfg.tomography.bootstrap_estimator)?;
            for w in &e.warnings {
                log::warn!("bootstrap: {w}");
            }
            Some(e)
        }
    };
    Ok(Reconstruction { estimator, rho, loglik_history, iterations_used, converged, errors })
}

pub fn correct(rho: &DensityMatrix, eta: f64) -> CliResult<Correction> {
    let inv = invert_loss(rho, eta)?;
    let populations = inv.state.diagonal();
    Ok(Correction {
        eta,
        renormalized: inv.state.renormalized_diagonal(CORRECTED_SUPPORT),
        fidelity: populations.get(1).copied().unwrap_or(0.0),
        wigner_origin: wigner_origin(&populations),
        populations,
        inversion: inv.status,
    })
}

pub fn summarize(rec: &Reconstruction, n_samples: usize, correct_eta: Option<f64>) -> CliResult<StateSummary> {
    let corrected = match correct_eta {
        Some(eta) => Some(correct(&rec.rho, eta)?),
        None => None,
    };
    Ok(StateSummary {
        estimator: rec.estimator,
        n_samples,
        populations: rec.populations(),
        fidelity: fidelity_with_fock(&rec.rho, 1)?,
        wigner_origin: wigner(&rec.rho, 0.0, 0.0)?,
        iterations_used: rec.iterations_used,
        converged: rec.converged,
        loglik: rec.loglik_history.last().copied().unwrap_or(f64::NAN),
        std_errors: rec.errors.as_ref().map(|e| e.std_errors.clone()),
        corrected,
    })
}

pub fn cmd_reconstruct(cfg: &Config, quadratures: &Path, correct_eta: Option<f64>, emit_wigner: bool, out: &Path) -> CliResult<()> {
    let samples = read_quadratures(quadratures)?;
    let rec = reconstruct(cfg, &samples)?;
    write_json(&out.join(RHO_FILE), &rec.rho)?;
    write_loglik(&out.join(LOGLIK_FILE), &rec.loglik_history)?;
    if let Some(e) = &rec.errors {
        write_json(&out.join(ERRORS_FILE), &Envelope::new("reconstruct", cfg, e))?;
    }
    if emit_wigner {
        let ext = cfg.report.wigner_extent;
        let grid = wigner_grid(&rec.rho, (-ext, ext), (-ext, ext), cfg.report.wigner_resolution)?;
        let path = out.join(WIGNER_FILE);
        let file = File::create(&path).with_path(&path)?;
        grid.write_csv(BufWriter::new(file)).with_path(&path)?;
    }
    let summary = summarize(&rec, samples.len(), correct_eta)?;
    log::info!(
        "rho_11 = {:.4}, W(0,0) = {:.4} after {} iterations",
        summary.fidelity,
        summary.wigner_origin,
        summary.iterations_used
    );
    write_json(&out.join(REPORT_FILE), &Envelope::new("reconstruct", cfg, summary))
}
