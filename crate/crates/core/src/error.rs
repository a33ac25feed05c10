//! Error type for invalid configuration.

use thiserror::Error;

/// Rejected configuration input (bad distribution parameters, malformed
/// graph files, out-of-range probabilities, ...).
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ConfigError {
    #[error("probability out of range: {name} = {value}")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },
    #[error("{0}")]
    InvalidParameter(String),
    #[error("empirical pmf must sum to 1 within 1e-12 (got {sum})")]
    PmfNotNormalized { sum: f64 },
    #[error("graph parse error at line {line}: {reason}")]
    GraphParse { line: usize, reason: String },
}

impl ConfigError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        ConfigError::InvalidParameter(msg.into())
    }
}
