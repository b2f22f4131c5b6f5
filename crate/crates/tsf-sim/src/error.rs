use std::path::PathBuf;

use thiserror::Error;
use tsf_core::TsfError;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error("run {run_id} aborted at step {step}: {source}")]
    RunAborted {
        run_id: u64,
        step: usize,
        #[source]
        source: TsfError,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, SimError>;
