//! File formats and report generation behind the `toric` command.

use std::path::PathBuf;

pub mod commands;
pub mod format;

#[derive(Debug, thiserror::Error)]
pub enum ToolError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Core(#[from] toric_core::Error),
    #[error("{0}")]
    Input(String),
}
