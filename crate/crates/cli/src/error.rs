use groupoid_cover::{CoverError, DocumentError};
use serde_json::Value;
use thiserror::Error;

/// Failure of a command, classified by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or a malformed document (exit 2).
    #[error("{0}")]
    Input(String),
    /// The mathematics says no (exit 1); `report` goes to the output.
    #[error("{message}")]
    Negative { message: String, report: Value },
    /// An internal theorem check failed (exit 3).
    #[error("internal verification failure: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Negative { .. } => 1,
            CliError::Input(_) => 2,
            CliError::Verification(_) => 3,
        }
    }

    pub fn negative(message: impl Into<String>, report: Value) -> Self {
        CliError::Negative {
            message: message.into(),
            report,
        }
    }
}

impl From<CoverError> for CliError {
    fn from(e: CoverError) -> Self {
        if e.is_verification_failure() {
            return CliError::Verification(e.to_string());
        }
        match e {
            CoverError::NotCovering(_)
            | CoverError::NotFree { .. }
            | CoverError::NotRegular
            | CoverError::NotMonic
            | CoverError::DoesNotCover => {
                CliError::negative(e.to_string(), serde_json::json!({"error": e.to_string()}))
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        CliError::Input(e.to_string())
    }
}
