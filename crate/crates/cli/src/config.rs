//! Run configuration: one JSON file, every section optional, reference values by default.

use std::path::Path;

use anyhow::anyhow;
use herald_core::opo::{ConditioningPath, EfficiencyBudget, FilterSpec, OpoParams};
use herald_core::synth::{NoiseModel, PhaseSchedule, DEFAULT_EVENTS};
use herald_core::tomography::{Estimator, ProjectorGrid, TomographySettings};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub opo: OpoParams,
    pub budget: EfficiencyBudget,
    pub conditioning: ConditioningPath,
    pub filters: FilterSpec,
    pub acquisition: AcquisitionConfig,
    pub extraction: ExtractionConfig,
    pub tomography: TomographyConfig,
    pub correction: CorrectionConfig,
    pub report: ReportConfig,
    /// Acceptance windows checked by `pipeline`.
    pub expected: Option<Expected>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: 1,
            opo: OpoParams::reference(),
            budget: EfficiencyBudget::reference(),
            conditioning: ConditioningPath::reference(),
            filters: FilterSpec::reference(),
            acquisition: AcquisitionConfig::default(),
            extraction: ExtractionConfig::default(),
            tomography: TomographyConfig::default(),
            correction: CorrectionConfig::default(),
            report: ReportConfig::default(),
            expected: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AcquisitionConfig {
    pub n_events: usize,
    /// Events in the separate vacuum (blocked signal) run.
    pub vacuum_events: usize,
    /// Digitizer sample spacing, s.
    pub dt: f64,
    pub n_samples: usize,
    /// Fock truncation of the simulated source.
    pub n_max: usize,
    /// Electronic noise below vacuum noise, dB. `null` disables it.
    pub electronic_clearance_db: Option<f64>,
    pub schedule: PhaseSchedule,
    /// Derive `conditioning.leakage` from the filter cascade.
    pub filter_leakage: bool,
    /// Comb orders on each side counted by the leakage estimate.
    pub comb_orders: usize,
}

impl Default for AcquisitionConfig {
    fn default() -> Self {
        Self {
            n_events: DEFAULT_EVENTS,
            vacuum_events: 20_000,
            dt: 0.2e-9,
            n_samples: 500,
            n_max: 10,
            electronic_clearance_db: Some(20.0),
            schedule: PhaseSchedule::default(),
            filter_leakage: true,
            comb_orders: 100,
        }
    }
}

impl AcquisitionConfig {
    pub fn noise(&self) -> NoiseModel {
        self.electronic_clearance_db.map_or(NoiseModel::NONE, NoiseModel::from_clearance_db)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl std::str::FromStr for ScanRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected START:STOP:STEP, got {s:?}"));
        }
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        Ok(Self { start: num(parts[0])?, stop: num(parts[1])?, step: num(parts[2])? })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractionConfig {
    /// Mode bandwidth used for the final extraction. When absent, the scan
    /// optimum is used, or `opo.gamma` without a scan.
    pub gamma: Option<f64>,
    pub scan: Option<ScanRange>,
    pub scan_estimator: Estimator,
    /// Rescale by a vacuum run so that vacuum variance is 1/2.
    pub calibrate: bool,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self {
            gamma: None,
            scan: Some(ScanRange { start: 40e6, stop: 90e6, step: 5e6 }),
            scan_estimator: Estimator::Diagonal,
            calibrate: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TomographyConfig {
    pub n_max: usize,
    pub max_iters: usize,
    pub loglik_rel_tol: f64,
    pub projector_grid: ProjectorGrid,
    pub estimator: Estimator,
    /// 0 disables error bars.
    pub bootstrap_resamples: usize,
    pub bootstrap_estimator: Estimator,
}

impl Default for TomographyConfig {
    fn default() -> Self {
        let s = TomographySettings::default();
        Self {
            n_max: s.n_max,
            max_iters: s.max_iters,
            loglik_rel_tol: s.loglik_rel_tol,
            projector_grid: s.projector_grid,
            estimator: Estimator::MaxLik,
            bootstrap_resamples: 50,
            bootstrap_estimator: Estimator::Diagonal,
        }
    }
}

impl TomographyConfig {
    pub fn settings(&self, seed: u64) -> TomographySettings {
        TomographySettings {
            n_max: self.n_max,
            max_iters: self.max_iters,
            loglik_rel_tol: self.loglik_rel_tol,
            projector_grid: self.projector_grid,
            seed,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorrectionConfig {
    /// Detection efficiency divided out of the reconstruction. `null` uses
    /// the budget's total detection efficiency.
    pub eta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportConfig {
    /// Bandwidth used to quote brightness, Hz.
    pub brightness_bandwidth: f64,
    /// Corrected heralding rate as quoted in the literature, Hz.
    pub quoted_corrected_rate: f64,
    /// Quoted filter-cascade rejection.
    pub quoted_rejection: f64,
    /// Points per axis of the Wigner grid.
    pub wigner_resolution: usize,
    pub wigner_extent: f64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            brightness_bandwidth: 75e6,
            quoted_corrected_rate: 750e3,
            quoted_rejection: 0.003,
            wigner_resolution: 81,
            wigner_extent: 4.0,
        }
    }
}

/// Closed intervals `[lo, hi]` the pipeline results must fall into.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Expected {
    pub rho00: Option<[f64; 2]>,
    pub rho11: Option<[f64; 2]>,
    pub rho22: Option<[f64; 2]>,
    pub corrected_rho11: Option<[f64; 2]>,
    pub wigner_origin: Option<[f64; 2]>,
    pub gamma_star: Option<[f64; 2]>,
}

impl Config {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(anyhow!("cannot read config {}: {e}", path.display())))?;
        let cfg: Config = serde_json::from_str(&text)
            .map_err(|e| CliError::usage(anyhow!("invalid config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load_or_default(path: Option<&Path>) -> CliResult<Self> {
        match path {
            Some(p) => Self::load(p),
            None => {
                let cfg = Self::default();
                cfg.validate()?;
                Ok(cfg)
            }
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        self.opo.validate()?;
        self.budget.validate()?;
        self.conditioning.validate()?;
        self.filters.validate()?;
        self.tomography.settings(self.seed).validate()?;
        let a = &self.acquisition;
        if !(a.dt > 0.0 && a.dt.is_finite()) {
            return Err(CliError::usage(anyhow!("acquisition.dt must be positive")));
        }
        if a.n_samples == 0 {
            return Err(CliError::usage(anyhow!("acquisition.n_samples must be positive")));
        }
        if a.filter_leakage && a.comb_orders == 0 {
            return Err(CliError::usage(anyhow!("acquisition.comb_orders must be positive")));
        }
        if let Some(eta) = self.correction.eta {
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(CliError::usage(anyhow!("correction.eta must lie in (0, 1]")));
            }
        }
        if let Some(g) = self.extraction.gamma {
            if !(g > 0.0 && g.is_finite()) {
                return Err(CliError::usage(anyhow!("extraction.gamma must be positive")));
            }
        }
        if let Some(s) = self.extraction.scan {
            herald_core::extract::gamma_grid(s.start, s.stop, s.step)?;
        }
        Ok(())
    }
}
