//! Batch front end: `simulate`, `extract`, `reconstruct`, `budget` and
//! `pipeline`, each driven by one JSON configuration.

pub mod budget;
pub mod config;
pub mod error;
pub mod extract;
pub mod model;
pub mod pipeline;
pub mod reconstruct;
pub mod report;
pub mod simulate;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use herald_core::tomography::Estimator;

pub use config::Config;
pub use error::{CliError, CliResult, ExitKind};
pub use report::VERSION;

#[derive(Debug, Parser)]
#[command(name = "herald", version = VERSION, about = "Heralded single-photon simulation and homodyne tomography")]
pub struct Cli {
    /// JSON configuration; reference values are used for anything left out.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Master seed, overriding the configuration.
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
    /// Worker threads for the parallel stages.
    #[arg(long, global = true, value_name = "N", env = "HERALD_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EstimatorArg {
    Maxlik,
    Diagonal,
}

impl From<EstimatorArg> for Estimator {
    fn from(e: EstimatorArg) -> Self {
        match e {
            EstimatorArg::Maxlik => Estimator::MaxLik,
            EstimatorArg::Diagonal => Estimator::Diagonal,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize signal and vacuum trace files plus a manifest.
    Simulate {
        /// Number of heralded events.
        #[arg(long)]
        events: Option<usize>,
        /// Number of vacuum (shot-noise) events, 0 to skip.
        #[arg(long)]
        vacuum_events: Option<usize>,
    },
    /// Turn traces into (x, theta) quadratures, optionally scanning the mode bandwidth.
    Extract {
        /// Signal trace file [default: OUT/traces.htrc].
        #[arg(long, value_name = "PATH")]
        traces: Option<PathBuf>,
        /// Vacuum trace file for shot-noise calibration [default: OUT/vacuum.htrc if present].
        #[arg(long, value_name = "PATH")]
        vacuum: Option<PathBuf>,
        /// Fixed mode bandwidth in Hz; disables the configured scan unless --scan is given.
        #[arg(long)]
        gamma: Option<f64>,
        /// Bandwidth scan START:STOP:STEP in Hz.
        #[arg(long, value_name = "START:STOP:STEP")]
        scan: Option<config::ScanRange>,
        /// Expected digitizer sample spacing in s.
        #[arg(long)]
        dt: Option<f64>,
        /// Leave quadratures in raw units.
        #[arg(long)]
        no_calibration: bool,
    },
    /// Reconstruct the state from a quadrature CSV.
    Reconstruct {
        /// Quadrature CSV [default: OUT/quadratures.csv].
        #[arg(long, value_name = "PATH")]
        quadratures: Option<PathBuf>,
        /// Fock-space truncation.
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, value_enum)]
        estimator: Option<EstimatorArg>,
        /// Bootstrap resamples, 0 to skip.
        #[arg(long)]
        bootstrap: Option<usize>,
        /// Also report the state with this detection efficiency divided out.
        #[arg(long, value_name = "ETA")]
        correct_eta: Option<f64>,
        /// Write the Wigner function on a grid.
        #[arg(long)]
        wigner: bool,
    },
    /// Efficiency, rate and filter arithmetic.
    Budget,
    /// Simulate, extract, reconstruct and correct in memory, then check the expected windows.
    Pipeline {
        /// Number of heralded events.
        #[arg(long)]
        events: Option<usize>,
    },
}

fn init_threads(threads: Option<usize>) {
    if let Some(n) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::debug!("thread pool already initialized: {e}");
        }
    }
}

fn default_input(out: &Path, given: Option<PathBuf>, name: &str) -> PathBuf {
    given.unwrap_or_else(|| out.join(name))
}

pub fn run(cli: Cli) -> CliResult<()> {
    init_threads(cli.threads);
    let mut cfg = Config::load_or_default(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let out = cli.out.as_path();
    match cli.command {
        Command::Simulate { events, vacuum_events } => {
            if let Some(n) = events {
                cfg.acquisition.n_events = n;
            }
            if let Some(n) = vacuum_events {
                cfg.acquisition.vacuum_events = n;
            }
            cfg.validate()?;
            report::ensure_dir(out)?;
            simulate::cmd_simulate(&cfg, out)
        }
        Command::Extract { traces, vacuum, gamma, scan, dt, no_calibration } => {
            if let Some(g) = gamma {
                cfg.extraction.gamma = Some(g);
                cfg.extraction.scan = None;
            }
            if scan.is_some() {
                cfg.extraction.scan = scan;
            }
            if let Some(dt) = dt {
                cfg.acquisition.dt = dt;
            }
            if no_calibration {
                cfg.extraction.calibrate = false;
            }
            cfg.validate()?;
            let traces = default_input(out, traces, simulate::TRACES_FILE);
            let vacuum = vacuum.or_else(|| Some(out.join(simulate::VACUUM_FILE)).filter(|p| p.exists()));
            report::ensure_dir(out)?;
            extract::cmd_extract(&cfg, &traces, vacuum.as_deref(), out)
        }
        Command::Reconstruct { quadratures, n_max, estimator, bootstrap, correct_eta, wigner } => {
            if let Some(n) = n_max {
                cfg.tomography.n_max = n;
            }
            if let Some(e) = estimator {
                cfg.tomography.estimator = e.into();
            }
            if let Some(b) = bootstrap {
                cfg.tomography.bootstrap_resamples = b;
            }
            if correct_eta.is_some() {
                cfg.correction.eta = correct_eta;
            }
            cfg.validate()?;
            let input = default_input(out, quadratures, extract::QUADRATURES_FILE);
            report::ensure_dir(out)?;
            reconstruct::cmd_reconstruct(&cfg, &input, cfg.correction.eta, wigner, out)
        }
        Command::Budget => {
            cfg.validate()?;
            report::ensure_dir(out)?;
            let body = budget::budget_report(&cfg)?;
            let envelope = report::Envelope::new("budget", &cfg, body);
            report::write_json(&out.join("budget.json"), &envelope)?;
            print!("{}", report::to_json_string(&envelope)?);
            Ok(())
        }
        Command::Pipeline { events } => {
            if let Some(n) = events {
                cfg.acquisition.n_events = n;
            }
            cfg.validate()?;
            report::ensure_dir(out)?;
            pipeline::cmd_pipeline(&cfg, out)
        }
    }
}
