use std::path::Path;

use herald_core::fock::DensityMatrix;
use herald_core::synth::{build_temporal_mode, run_acquisition, write_trace_file, Acquisition, AcquisitionManifest};
use serde::Serialize;

use crate::config::Config;
use crate::error::{CliResult, Context};
use crate::model::{source_model, SourceModel};
use crate::report::{write_json, Envelope};

pub const TRACES_FILE: &str = "traces.htrc";
pub const VACUUM_FILE: &str = "vacuum.htrc";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Separates the vacuum run's random streams from the signal run's.
const VACUUM_STREAM: u64 = 0x7661_6375_756d;

pub struct Simulation {
    pub model: SourceModel,
    pub signal: Acquisition,
    pub vacuum: Option<Acquisition>,
}

pub fn simulate(cfg: &Config) -> CliResult<Simulation> {
    let model = source_model(cfg)?;
    let a = &cfg.acquisition;
    let mode = build_temporal_mode(cfg.opo.gamma, a.dt, a.n_samples)?;
    let noise = a.noise();
    let signal = run_acquisition(&model.state, a.n_events, &mode, &noise, a.schedule, cfg.seed)?;
    let vacuum = if a.vacuum_events > 0 {
        let vac = DensityMatrix::vacuum(1);
        Some(run_acquisition(&vac, a.vacuum_events, &mode, &noise, a.schedule, cfg.seed ^ VACUUM_STREAM)?)
    } else {
        None
    };
    Ok(Simulation { model, signal, vacuum })
}

#[derive(Serialize)]
struct Manifest<'a> {
    source: &'a SourceModel,
    traces: &'static str,
    signal: &'a AcquisitionManifest,
    vacuum_traces: Option<&'static str>,
    vacuum: Option<&'a AcquisitionManifest>,
}

pub fn cmd_simulate(cfg: &Config, out: &Path) -> CliResult<()> {
    let sim = simulate(cfg)?;
    let traces = out.join(TRACES_FILE);
    write_trace_file(&traces, &sim.signal.traces).with_path(&traces)?;
    if let Some(vac) = &sim.vacuum {
        let path = out.join(VACUUM_FILE);
        write_trace_file(&path, &vac.traces).with_path(&path)?;
    }
    let manifest = Manifest {
        source: &sim.model,
        traces: TRACES_FILE,
        signal: &sim.signal.manifest,
        vacuum_traces: sim.vacuum.as_ref().map(|_| VACUUM_FILE),
        vacuum: sim.vacuum.as_ref().map(|v| &v.manifest),
    };
    write_json(&out.join(MANIFEST_FILE), &Envelope::new("simulate", cfg, manifest))?;
    log::info!(
        "wrote {} signal and {} vacuum traces to {}",
        sim.signal.traces.len(),
        sim.vacuum.as_ref().map_or(0, |v| v.traces.len()),
        out.display()
    );
    Ok(())
}
