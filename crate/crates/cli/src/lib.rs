//! Library side of the `nygaard` binary: configuration, commands, JSON envelopes and fixture regression.

pub mod commands;
pub mod complexes;
pub mod config;
pub mod envelope;
pub mod regress;

use nygaard_core::error::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] CoreError),
    #[error("{path}: {msg}")]
    Fixture { path: String, msg: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Regression(String),
}

impl CliError {
    /// 0 ok, 1 usage or input errors, 2 when the engine ran out of truncation or precision, 3 failed regression.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(
                CoreError::NotStabilized(_) | CoreError::PrecisionExhausted { .. } | CoreError::TruncationTooTight(_),
            ) => 2,
            CliError::Regression(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
