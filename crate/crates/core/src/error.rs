use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("photon number {n} exceeds truncation n_max = {n_max}")]
    PhotonNumberOutOfRange { n: usize, n_max: usize },

    #[error("loss channel with efficiency {0} is not invertible")]
    NonInvertibleLoss(f64),

    #[error("temporal-mode window too short: {n_samples} samples capture {captured:.5} of the mode energy, need at least {min_samples}")]
    WindowTooShort {
        n_samples: usize,
        min_samples: usize,
        captured: f64,
    },

    #[error("trace/mode mismatch: {0}")]
    Mismatch(String),

    #[error("need at least {needed} traces for calibration, got {got}")]
    TooFewTraces { needed: usize, got: usize },

    #[error("empty sample set")]
    EmptySamples,

    #[error("probability underflow at sample {index} (x = {x}, theta = {theta}): Tr(rho Pi) = {value}")]
    Underflow {
        index: usize,
        x: f64,
        theta: f64,
        value: f64,
    },

    #[error("malformed trace file {path}: {reason}")]
    TraceFormat { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
