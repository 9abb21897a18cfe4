use dualspace_core::Error as CoreError;
use thiserror::Error;

/// Errors surfaced by the command line, each with a fixed exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    /// The reader of stdout went away; not worth a diagnostic.
    pub fn is_broken_pipe(&self) -> bool {
        matches!(self, CliError::Io(e) if e.kind() == std::io::ErrorKind::BrokenPipe)
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Numerical(_) | CliError::Io(_) => 4,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NonFinite { .. }
            | CoreError::FieldMismatch
            | CoreError::Singular { .. }
            | CoreError::NotHermitian(_)
            | CoreError::RankDeficient(_)
            | CoreError::NoConvergence(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            CliError::Io(e.into())
        } else {
            CliError::Parse(e.to_string())
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            match e.into_kind() {
                csv::ErrorKind::Io(io) => CliError::Io(io),
                other => CliError::Parse(format!("{other:?}")),
            }
        } else {
            CliError::Parse(e.to_string())
        }
    }
}
