use std::path::Path;

use herald_core::DensityMatrix;
use serde::Serialize;

use crate::budget::{budget_report, BudgetReport};
use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::extract::{extract, ScanReport};
use crate::model::SourceModel;
use crate::reconstruct::{reconstruct, summarize, StateSummary, RHO_FILE};
use crate::report::{write_json, Envelope};
use crate::simulate::simulate;

pub const REPORT_FILE: &str = "pipeline.json";

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AcquisitionSummary {
    pub n_events: usize,
    pub vacuum_events: usize,
    pub n_samples: usize,
    pub dt: f64,
    pub synthesis_gamma: f64,
    pub electronic_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtractionSummary {
    pub gamma: f64,
    pub calibration: Option<f64>,
    pub scan: Option<ScanReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub budget: BudgetReport,
    pub source: SourceModel,
    pub acquisition: AcquisitionSummary,
    pub extraction: ExtractionSummary,
    pub state: StateSummary,
    pub checks: Vec<Check>,
    pub passed: bool,
    #[serde(skip)]
    pub rho: DensityMatrix,
}

pub fn run_pipeline(cfg: &Config) -> CliResult<PipelineReport> {
    let budget = budget_report(cfg)?;
    let sim = simulate(cfg)?;
    let ex = extract(cfg, &sim.signal.traces, sim.vacuum.as_ref().map(|v| &v.traces))?;
    let rec = reconstruct(cfg, &ex.samples)?;
    let eta = cfg.correction.eta.unwrap_or(budget.efficiencies.eta_tot);
    let state = summarize(&rec, ex.samples.len(), Some(eta))?;
    let checks = cfg.expected.as_ref().map_or_else(Vec::new, |e| {
        let corrected = state.corrected.as_ref().map_or(f64::NAN, |c| c.fidelity);
        let gamma_star = ex.scan.as_ref().map_or(ex.gamma, |s| s.gamma_star);
        [
            ("rho00", e.rho00, state.populations[0]),
            ("rho11", e.rho11, state.populations.get(1).copied().unwrap_or(0.0)),
            ("rho22", e.rho22, state.populations.get(2).copied().unwrap_or(0.0)),
            ("corrected_rho11", e.corrected_rho11, corrected),
            ("wigner_origin", e.wigner_origin, state.wigner_origin),
            ("gamma_star", e.gamma_star, gamma_star),
        ]
        .into_iter()
        .filter_map(|(name, window, value)| {
            window.map(|[lo, hi]| Check { name, value, lo, hi, pass: value >= lo && value <= hi })
        })
        .collect()
    });
    let passed = checks.iter().all(|c| c.pass);
    let a = &cfg.acquisition;
    Ok(PipelineReport {
        budget,
        source: sim.model,
        acquisition: AcquisitionSummary {
            n_events: a.n_events,
            vacuum_events: a.vacuum_events,
            n_samples: a.n_samples,
            dt: a.dt,
            synthesis_gamma: cfg.opo.gamma,
            electronic_ratio: a.noise().electronic_ratio,
        },
        extraction: ExtractionSummary { gamma: ex.gamma, calibration: ex.calibration, scan: ex.scan },
        state,
        checks,
        passed,
        rho: rec.rho,
    })
}

pub fn cmd_pipeline(cfg: &Config, out: &Path) -> CliResult<()> {
    let report = run_pipeline(cfg)?;
    write_json(&out.join(RHO_FILE), &report.rho)?;
    write_json(&out.join(REPORT_FILE), &Envelope::new("pipeline", cfg, &report))?;
    for c in &report.checks {
        println!(
            "{} {:<16} {:.6} in [{}, {}]",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            c.lo,
            c.hi
        );
    }
    if report.passed {
        println!("PASS pipeline ({} checks)", report.checks.len());
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
        Err(CliError::check_failed(format!("pipeline checks failed: {}", failed.join(", "))))
    }
}
