use thiserror::Error;

/// Error taxonomy shared by the library and the CLI. The CLI maps these to
/// exit codes: validation failures exit 1, budget refusals exit 2, and
/// internal consistency failures exit 3.
#[derive(Debug, Error)]
pub enum QcharError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain mismatch: {left} vs {right} generators")]
    DomainMismatch { left: usize, right: usize },

    #[error("resource budget exceeded: {0}")]
    Budget(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl QcharError {
    pub fn exit_code(&self) -> i32 {
        match self {
            QcharError::InvalidInput(_) | QcharError::DomainMismatch { .. } => 1,
            QcharError::Budget(_) => 2,
            QcharError::Internal(_) => 3,
        }
    }
}
