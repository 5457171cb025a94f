//! Error-to-exit-code mapping.
//!
//! Exit 0 on success; 2 for input/data problems (unreadable or malformed
//! files, mismatched line counts, empty corpora); 3 for configuration
//! problems (weights outside their ranges, missing scorer sources).

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Input or data error; exit code 2.
    Data(String),
    /// Configuration error; exit code 3.
    Config(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Data(_) => 2,
            CliError::Config(_) => 3,
        }
    }

    pub fn data(err: impl fmt::Display) -> Self {
        CliError::Data(err.to_string())
    }

    pub fn config(err: impl fmt::Display) -> Self {
        CliError::Config(err.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Data(msg) => write!(f, "{msg}"),
            CliError::Config(msg) => write!(f, "configuration: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}
