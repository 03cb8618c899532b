use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{source_name}:{line}:{column}: {message}")]
    Config { source_name: String, line: usize, column: usize, message: String },
    #[error("unknown scenario {0:?} (not in the catalog and no such file)")]
    UnknownScenario(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("unknown strategy {0:?}")]
    Strategy(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed report: {0}")]
    Report(String),
    #[error(transparent)]
    Ideal(#[from] dynideal::IdealError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn config(source_name: &str, e: &serde_json::Error) -> Self {
        CliError::Config { source_name: source_name.to_string(), line: e.line(), column: e.column(), message: strip_position(&e.to_string()) }
    }
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}
