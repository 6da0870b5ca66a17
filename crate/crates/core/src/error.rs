use std::io;

use thiserror::Error;

use crate::types::{AgentId, CellId};

/// A [`crate::config::SimConfig`] invariant that does not hold.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("invalid configuration: {0}")]
    Invariant(String),
    #[error("unknown preset `{0}` (expected `paper-text` or `paper-table`)")]
    UnknownPreset(String),
    #[error("cannot parse `{value}` for `{field}`: {reason}")]
    Parse {
        field: &'static str,
        value: String,
        reason: String,
    },
    #[error("config file: {0}")]
    File(String),
}

#[derive(Debug, Error)]
pub enum SensingError {
    #[error("detections from different cameras (`{0}` vs `{1}`) cannot be compared")]
    CrossCamera(String, String),
}

/// Failures while reading a line-delimited detection stream.
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown camera_id `{camera_id}`")]
    UnknownCamera { line: usize, camera_id: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InfraError {
    #[error("unknown cell id {0}")]
    UnknownCell(CellId),
    #[error("agent {0} is not part of the population")]
    UnknownAgent(AgentId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrchestratorError {
    #[error("agent {0} cannot be quarantined: not in the health registry")]
    NotInRegistry(AgentId),
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid sweep: {0}")]
    Sweep(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
