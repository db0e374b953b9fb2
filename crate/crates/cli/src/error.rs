use heron_core::HeronError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or invalid scenario file, bad flag value.
    #[error("{0}")]
    Schema(String),

    #[error("{0}")]
    Io(String),

    /// A numeric precondition failed, e.g. certifying at an infeasible point.
    #[error(transparent)]
    Numeric(#[from] HeronError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Schema(_) | Self::Io(_) => 1,
            Self::Numeric(_) => 2,
        }
    }
}
