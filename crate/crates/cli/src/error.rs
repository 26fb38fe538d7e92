use std::fmt;
use std::path::Path;

use plumbing_core::relative::{FileError, RelativeError};
use plumbing_core::GraphError;
use serde_json::json;

/// A failure reported on standard error with exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(kind: &'static str, message: impl Into<String>) -> Self {
        CliError { kind, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError::new("io", message)
    }

    pub fn input(message: impl Into<String>) -> Self {
        CliError::new("input", message)
    }

    pub fn file(path: &Path, e: FileError) -> Self {
        let kind = match e {
            FileError::Syntax { .. } => "syntax",
            FileError::Invalid { .. } => "input",
        };
        CliError::new(kind, format!("{}: {e}", path.display()))
    }

    pub fn to_json(&self) -> String {
        let doc = json!({ "error": { "kind": self.kind, "message": self.message } });
        serde_json::to_string_pretty(&doc).expect("error serializes")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        let kind = match e {
            GraphError::Syntax { .. } => "syntax",
            GraphError::Structure { .. } => "structure",
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<RelativeError> for CliError {
    fn from(e: RelativeError) -> Self {
        let kind = match e {
            RelativeError::Lattice(_) | RelativeError::NotEffective(_) => "input",
            RelativeError::Hypothesis { .. } | RelativeError::Precondition(_) => "precondition",
            RelativeError::Oracle(_) => "oracle",
            RelativeError::BoxTooLarge { .. } => "limit",
            _ => "computation",
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<plumbing_core::opt::OptError> for CliError {
    fn from(e: plumbing_core::opt::OptError) -> Self {
        CliError::new("computation", e.to_string())
    }
}
