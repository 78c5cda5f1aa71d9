use std::path::PathBuf;

use graphwalk_core::circuit::CircuitError;
use graphwalk_core::graph::GraphError;
use graphwalk_core::sim::SimError;
use graphwalk_core::spectral::SpectralError;
use graphwalk_core::walk::WalkError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("graph error: {0}")]
    Graph(#[from] GraphError),
    #[error("no marked edge within {cap} calls")]
    CallCap { cap: u64 },
    #[error("circuit is not equivalent to the walk step: {0}")]
    Equivalence(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Read { .. } | CliError::Write { .. } => 1,
            CliError::Graph(_) => 2,
            CliError::CallCap { .. } => 3,
            CliError::Equivalence(_) => 4,
        }
    }
}

impl From<WalkError> for CliError {
    fn from(e: WalkError) -> Self {
        match e {
            WalkError::CallCapExceeded { cap } => CliError::CallCap { cap },
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::Walk(w) => w.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<CircuitError> for CliError {
    fn from(e: CircuitError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Equivalence(e.to_string())
    }
}
