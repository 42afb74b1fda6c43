//! Report envelopes and the small CSV/JSON payload writers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::anyhow;
use herald_core::QuadratureSample;
use serde::Serialize;

use crate::config::Config;
use crate::error::{CliError, CliResult, Context};

/// Crate version plus `git describe` of the build tree.
pub const VERSION: &str = env!("HERALD_VERSION");

#[derive(Debug, Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub tool: &'static str,
    pub command: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub config: &'a Config,
    #[serde(flatten)]
    pub body: T,
}

impl<'a, T: Serialize> Envelope<'a, T> {
    pub fn new(command: &'static str, config: &'a Config, body: T) -> Self {
        Self { tool: "herald", command, version: VERSION, seed: config.seed, config, body }
    }
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).with_path(dir)
}

pub fn to_json_string<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(CliError::io)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    std::fs::write(path, to_json_string(value)?).with_path(path)
}

pub fn write_quadratures(path: &Path, samples: &[QuadratureSample]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(CliError::io).with_path(path)?;
    w.write_record(["x", "theta"]).map_err(CliError::io)?;
    for s in samples {
        w.write_record([s.x.to_string(), s.theta.to_string()]).map_err(CliError::io)?;
    }
    w.flush().with_path(path)
}

/// Reads `x,theta` rows; a header row is optional.
pub fn read_quadratures(path: &Path) -> CliResult<Vec<QuadratureSample>> {
    let file = File::open(path).with_path(path)?;
    let mut r = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(file);
    let mut out = Vec::new();
    for (line, record) in r.records().enumerate() {
        let record = record.map_err(CliError::io).with_path(path)?;
        if line == 0 && record.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        if record.len() != 2 {
            return Err(CliError::io(anyhow!("{}: line {}: expected 2 columns", path.display(), line + 1)));
        }
        let parse = |k: usize| {
            record[k].parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                CliError::io(anyhow!("{}: line {}: bad number {:?}", path.display(), line + 1, &record[k]))
            })
        };
        out.push(QuadratureSample::new(parse(0)?, parse(1)?));
    }
    Ok(out)
}

pub fn write_loglik(path: &Path, history: &[f64]) -> CliResult<()> {
    let file = File::create(path).with_path(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "iteration,loglik").with_path(path)?;
    for (k, l) in history.iter().enumerate() {
        writeln!(w, "{k},{l}").with_path(path)?;
    }
    w.flush().with_path(path)
}
