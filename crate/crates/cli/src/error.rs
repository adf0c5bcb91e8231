//! Front-end failures and their exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Engine(#[from] mirror_gw_core::Error),
    #[error("cache I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 1 for a failed check, 2 for anything the caller must fix.
    pub fn exit_code(&self) -> u8 {
        use mirror_gw_core::Error as E;
        match self {
            CliError::Verification(_) => 1,
            CliError::Engine(E::InvalidParams(_) | E::Resonance(_) | E::Guard(_) | E::Parse(_)) => 2,
            CliError::Engine(_) => 1,
            CliError::Config(_) | CliError::Io(_) | CliError::Json(_) | CliError::Csv(_) => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
