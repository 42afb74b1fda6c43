use std::fmt;
use std::process::ExitCode;

/// Process exit status classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    /// A pipeline check against the expected values failed.
    CheckFailed = 1,
    Usage = 2,
    Io = 3,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ExitKind,
    pub error: anyhow::Error,
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn usage(error: impl Into<anyhow::Error>) -> Self {
        Self { kind: ExitKind::Usage, error: error.into() }
    }

    pub fn io(error: impl Into<anyhow::Error>) -> Self {
        Self { kind: ExitKind::Io, error: error.into() }
    }

    pub fn check_failed(msg: impl fmt::Display) -> Self {
        Self { kind: ExitKind::CheckFailed, error: anyhow::anyhow!("{msg}") }
    }

    pub fn context(self, msg: impl fmt::Display + Send + Sync + 'static) -> Self {
        Self { kind: self.kind, error: self.error.context(msg) }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.kind as u8)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

impl From<herald_core::Error> for CliError {
    fn from(e: herald_core::Error) -> Self {
        use herald_core::Error as E;
        let kind = match e {
            E::Io(_) | E::TraceFormat { .. } | E::Csv(_) => ExitKind::Io,
            _ => ExitKind::Usage,
        };
        Self { kind, error: e.into() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::io(e)
    }
}

pub(crate) trait Context<T> {
    fn with_path(self, path: &std::path::Path) -> CliResult<T>;
}

impl<T, E: Into<CliError>> Context<T> for std::result::Result<T, E> {
    fn with_path(self, path: &std::path::Path) -> CliResult<T> {
        self.map_err(|e| e.into().context(format!("{}", path.display())))
    }
}
