//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by the geometry and partition primitives.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeomError {
    #[error("rank deficient: numerical rank {rank} < {expected} input vectors")]
    RankDeficient { rank: usize, expected: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("kernel direction is numerically ambiguous (sigma ratio {ratio:.3e})")]
    IllConditioned { ratio: f64 },
    #[error("non-finite value encountered in float-mode input")]
    NonFinite,
    #[error("{0}")]
    Invalid(String),
}

/// Errors raised by the solver surface.
#[derive(Debug, Clone, Error)]
pub enum SolveError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("search failed: {0}")]
    Failed(crate::solver::FailureReport),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}

/// Field-level diagnostics for a certificate that fails structural checks.
#[derive(Debug, Clone, Error, PartialEq)]
#[error("malformed certificate: {field}: {detail}")]
pub struct MalformedCertificate {
    pub field: String,
    pub detail: String,
}

impl MalformedCertificate {
    pub fn new(field: impl Into<String>, detail: impl Into<String>) -> Self {
        MalformedCertificate {
            field: field.into(),
            detail: detail.into(),
        }
    }
}
