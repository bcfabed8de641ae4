use std::fmt;

use serde::Serialize;
use sqfree_core::Error as CoreError;

/// How a failure maps onto the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    /// Bad arguments or inputs violating a precondition.
    Usage,
    /// A configured cap was hit.
    Budget,
    /// `verify` found a failing check.
    Verification,
    /// Anything else, e.g. walking an empty core.
    Runtime,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Usage => 2,
            ErrorKind::Budget => 3,
            ErrorKind::Verification => 4,
            ErrorKind::Runtime => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Usage,
            message: message.into(),
        }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Verification,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }

    /// `{"error": {"kind": ..., "message": ..., "exit_code": ...}}`
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "error": { "kind": self.kind, "message": self.message, "exit_code": self.exit_code() }
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error: {}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let kind = match e {
            CoreError::BudgetExceeded { .. } | CoreError::KMaxExceeded { .. } => ErrorKind::Budget,
            CoreError::EmptyCore => ErrorKind::Runtime,
            _ => ErrorKind::Usage,
        };
        CliError {
            kind,
            message: e.to_string(),
        }
    }
}
