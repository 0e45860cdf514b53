use std::path::Path;
use std::process::ExitCode;

use thiserror::Error;

/// Failure categories, each with its own exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn category(&self) -> &'static str {
        match self {
            Self::Config(_) => "config",
            Self::Numeric(_) => "numeric",
            Self::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            Self::Config(_) => 2,
            Self::Numeric(_) => 3,
            Self::Io(_) => 4,
        })
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    pub fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Self::Io(format!("{}: {e}", path.display()))
    }

    /// Prefixes the message with `context`.
    pub fn context(self, context: &str) -> Self {
        match self {
            Self::Config(m) => Self::Config(format!("{context}: {m}")),
            Self::Numeric(m) => Self::Numeric(format!("{context}: {m}")),
            Self::Io(m) => Self::Io(format!("{context}: {m}")),
        }
    }
}

impl From<rbrdo::Error> for CliError {
    fn from(e: rbrdo::Error) -> Self {
        if e.is_usage() {
            Self::Config(e.to_string())
        } else {
            Self::Numeric(e.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
