use thiserror::Error;

/// Failure classes, each with its own process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("i/o error: {0}")]
    Io(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Internal(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

impl From<rcvv::Error> for CliError {
    fn from(e: rcvv::Error) -> Self {
        match e {
            rcvv::Error::Internal(m) => CliError::Internal(m),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
