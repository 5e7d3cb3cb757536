use std::path::PathBuf;

use thiserror::Error;
use vortex_core::VortexError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const NOT_CONVERGED: i32 = 2;
    pub const PARTIAL_SCAN: i32 = 3;
    pub const CHECK_FAILED: i32 = 4;
    pub const IO: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config file {path}, line {line}: {reason}")]
    ConfigFile {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("solver failed: {0}")]
    Solver(#[from] VortexError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("serializing {what}: {source}")]
    Json {
        what: &'static str,
        #[source]
        source: serde_json::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::ConfigFile { .. } => exit::USAGE,
            // invalid numeric settings surface from the core as InvalidArgument
            CliError::Solver(VortexError::InvalidArgument(_)) => exit::USAGE,
            CliError::Solver(_) => exit::NOT_CONVERGED,
            CliError::Io { .. } | CliError::Json { .. } => exit::IO,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
