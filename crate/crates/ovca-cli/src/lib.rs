//! IO, configuration, and the batch pipeline around [`ovca_core`]:
//! CSV ingestion and export, TOML run configuration, the two pipeline
//! protocols, and deterministic report emission.

pub mod config;
pub mod csvio;
pub mod pipeline;
pub mod report;

pub use config::{InputConfig, PipelineConfig, Protocol};
pub use pipeline::run;
pub use report::{emit_report, RunReport};

use std::fmt;

/// Top-level error: configuration problems exit with code 1, everything that
/// happens after validation with code 2.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Runtime(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) => write!(f, "validation error: {msg}"),
            CliError::Runtime(msg) => write!(f, "runtime error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl From<ovca_core::Error> for CliError {
    fn from(e: ovca_core::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(format!("io error: {e}"))
    }
}
