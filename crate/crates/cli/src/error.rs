use thiserror::Error;

/// Maps onto the process exit code: usage problems are 2, everything else 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<pierce_core::Error> for CliError {
    fn from(e: pierce_core::Error) -> Self {
        match e {
            pierce_core::Error::Domain(m) => CliError::Usage(m),
            other => CliError::Failure(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
