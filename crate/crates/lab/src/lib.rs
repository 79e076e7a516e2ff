//! File formats, parallel Monte Carlo drivers and experiment commands for
//! `holonomy-core`. The `holonomy-lab` binary is a thin clap wrapper over
//! [`commands`].

pub mod commands;
pub mod formats;
pub mod mc;
pub mod report;

use std::fmt::Display;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: serde_json::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Invalid(String),
    /// A numeric or structural failure inside a library routine.
    #[error("{op} failed: {message}")]
    Op { op: &'static str, message: String },
}

impl LabError {
    pub fn op(op: &'static str, e: impl Display) -> Self {
        LabError::Op { op, message: e.to_string() }
    }
}
