use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let kind = match self {
            CliError::Config(_) => "config",
            CliError::Numerical(_) => "numerical",
        };
        json!({ "error": { "kind": kind, "message": self.to_string() } })
    }
}

/// Library errors are numerical failures.
pub fn num<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Numerical(e.to_string())
}
