use std::io;
use std::path::PathBuf;

use crossworld_core::Error as CoreError;

/// Failures of the file, config and command-line layer.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("malformed config: {0}")]
    Parse(String),
    #[error("config schema error: {0}")]
    Schema(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: line {line}: {message}")]
    Format { path: String, line: u64, message: String },
    #[error("{0}: file is empty")]
    EmptyFile(String),
    #[error("{}: input path does not exist", .0.display())]
    MissingPath(PathBuf),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    /// Process exit code: 2 usage or config, 3 data, 4 numerical.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Schema(_) | CliError::Usage(_) | CliError::MissingPath(_) => 2,
            CliError::Format { .. } | CliError::EmptyFile(_) | CliError::Io(_) => 3,
            CliError::Core(e) => core_exit_code(e),
        }
    }
}

fn core_exit_code(e: &CoreError) -> u8 {
    if e.is_numerical() {
        return 4;
    }
    match e {
        CoreError::InvalidConfig(_)
        | CoreError::TooFewNodes { .. }
        | CoreError::GridTooLarge { .. }
        | CoreError::MonteCarloGridNotAllowed { .. } => 2,
        CoreError::Setting { source, .. } => core_exit_code(source),
        _ => 3,
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
