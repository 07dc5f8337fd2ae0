//! CLI error categories mapped onto process exit codes.

use std::fmt;

/// 2 = usage, 3 = input/parse, 4 = numerical failure.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
            CliError::Numeric(_) => 4,
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

/// Core model failures surfacing mid-computation are numerical errors.
impl From<exosim_core::ModelError> for CliError {
    fn from(e: exosim_core::ModelError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
