use thiserror::Error;

use homeocomm::Error as CoreError;

#[derive(Error, Debug)]
pub enum CliError {
    /// Unreadable, malformed or inadmissible input documents.
    #[error("invalid spec: {0}")]
    Spec(String),

    #[error("malformed certificate: {0}")]
    Certificate(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) | CliError::Certificate(_) => 2,
            CliError::Write { .. } => 1,
            CliError::Core(e) => match e {
                CoreError::InvalidMap(_)
                | CoreError::InvalidArgument(_)
                | CoreError::NotOrientationPreserving(_)
                | CoreError::FiberMismatch => 2,
                CoreError::ToleranceExceeded(_) | CoreError::TrivialFactor { .. } => 4,
                CoreError::NotProper { .. }
                | CoreError::GraphViolation { .. }
                | CoreError::BandViolation { .. }
                | CoreError::HorizonExceeded { .. }
                | CoreError::NotLoxodromic { .. }
                | CoreError::EndsMismatch
                | CoreError::NonFinite => 3,
            },
        }
    }
}
