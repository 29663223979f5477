//! Crate-wide error type.

use thiserror::Error;

/// Pipeline stage that gave up during an extraction, reported alongside the
/// recursion level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Pruning,
    Recursion,
    LeftPool,
    BicliqueSearch,
    Assembly,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Stage::Pruning => "pruning",
            Stage::Recursion => "recursion",
            Stage::LeftPool => "left-pool",
            Stage::BicliqueSearch => "biclique-search",
            Stage::Assembly => "assembly",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("no qualifying subgraph found (level {level}, stage {stage})")]
    NotFound { level: usize, stage: Stage },

    #[error("search failed at level {level}, stage {stage} despite passing preconditions; this indicates a defect")]
    SearchFailure { level: usize, stage: Stage },

    #[error("refusing exhaustive scan: {subsets} subsets exceeds cap {cap}")]
    CapExceeded { subsets: u128, cap: u128 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
