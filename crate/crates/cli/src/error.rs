use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("line {line}: unresolved {kind} {name}")]
    Unresolved { line: usize, kind: &'static str, name: String },
    #[error("line {line}: duplicate {kind} {name}")]
    Duplicate { line: usize, kind: &'static str, name: String },
    #[error("line {line}: characteristic violation: {msg}")]
    Characteristic { line: usize, msg: String },
    #[error("line {line}: {msg}")]
    Command { line: usize, msg: String },
    #[error("line {line} ({context}): {source}")]
    Engine { line: usize, context: String, source: dyndeg_core::Error },
    #[error("{}:{line}: {msg}", path.display())]
    Declared { path: PathBuf, line: usize, msg: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] dyndeg_core::Error),
}

impl CliError {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        CliError::Parse { line, col, msg: msg.into() }
    }
}
