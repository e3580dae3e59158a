use std::io;

use kloos_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("bad cache file {path}: {reason}")]
    Cache { path: String, reason: String },
    #[error("fixture mismatch:\n{0}")]
    Fixture(String),
    #[error("{failed} verification check(s) failed")]
    Verification { failed: usize },
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn io(path: impl Into<String>, source: io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 2 precondition/domain, 3 resource, 4 consistency, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::Resource { .. }) => 3,
            CliError::Core(CoreError::Consistency(_)) | CliError::Fixture(_) | CliError::Verification { .. } => 4,
            CliError::Core(_) | CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Cache { .. } => 1,
        }
    }
}
