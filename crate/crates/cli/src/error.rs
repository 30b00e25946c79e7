//! CLI error classification and the exit-code contract:
//! 0 success, 1 usage error, 2 input error, 3 numerical/domain failure.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or invalid parameter values.
    Usage(String),
    /// Missing or malformed input files.
    Input(String),
    /// Numerical or domain failure reported by the core library.
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numeric(m) => write!(f, "numerical error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<rhythmiq::Error> for CliError {
    fn from(e: rhythmiq::Error) -> Self {
        use rhythmiq::Error::*;
        match e {
            Parse { .. } | Io(_) | Model(_) | DegenerateInput(_) => CliError::Input(e.to_string()),
            Antipodal
            | Domain { .. }
            | NoConvergence { .. }
            | InsufficientCoverage { .. }
            | StepTooLarge { .. } => CliError::Numeric(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
