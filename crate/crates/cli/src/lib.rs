//! Command-line front end for `qtherm`: scenario files in, CSV or JSON out.

pub mod app;
pub mod config;
pub mod figures;
pub mod scenarios;
pub mod table;

use thiserror::Error;

/// Failures of a CLI invocation, each with its exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("benchmark regression: {0}")]
    Regression(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Regression(_) => 5,
        }
    }
}

impl From<qtherm::Error> for CliError {
    fn from(e: qtherm::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
