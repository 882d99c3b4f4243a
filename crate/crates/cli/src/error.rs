use std::path::PathBuf;

use thiserror::Error;

/// One problem found while parsing or validating a config.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown key `{key}` (line {line})")]
    UnknownKey { key: String, line: usize },
    #[error("duplicate key `{key}` (line {line})")]
    DuplicateKey { key: String, line: usize },
    #[error("`{key}`: expected {expected}, found `{found}`")]
    TypeMismatch { key: String, expected: &'static str, found: String },
    #[error("`{key}`: {reason}")]
    PreconditionViolation { key: String, reason: String },
    #[error("grid.n = {value} is odd")]
    OddGridSize { key: String, value: i64 },
    #[error("missing required keys: {}", .0.join(", "))]
    MissingRequired(Vec<String>),
}

impl ConfigError {
    /// The key the error refers to, if any.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::UnknownKey { key, .. }
            | ConfigError::DuplicateKey { key, .. }
            | ConfigError::TypeMismatch { key, .. }
            | ConfigError::PreconditionViolation { key, .. }
            | ConfigError::OddGridSize { key, .. } => Some(key),
            _ => None,
        }
    }
}

/// Every error found in a config, in line order.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ConfigErrors(pub Vec<ConfigError>);

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(#[from] ConfigErrors),
    #[error(transparent)]
    Numerical(#[from] nslab_core::Error),
    #[error("check failed: {0}")]
    Violation(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) | CliError::Violation(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}
