use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: io::Error },

    #[error(transparent)]
    Core(#[from] nlcs_core::Error),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    /// Process exit status: 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output { .. } | CliError::Core(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}
