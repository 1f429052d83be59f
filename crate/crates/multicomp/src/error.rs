use std::io;
use std::process::ExitCode;

use thiserror::Error;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] multicomp_core::Error),

    #[error("{0}: {1}")]
    Io(String, #[source] io::Error),

    #[error("{0}: invalid JSON: {1}")]
    Json(String, #[source] serde_json::Error),

    #[error("{0}")]
    Invalid(String),

    /// A verification check failed on a built codebook.
    #[error("verification failed: {0}")]
    CheckFailed(String),
}

impl CliError {
    /// 2 validation or I/O, 3 brute-force guard, 4 internal invariant violation.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_guard() => 3,
            CliError::Core(e) if e.is_internal() => 4,
            CliError::CheckFailed(_) => 4,
            _ => 2,
        }
    }
}
