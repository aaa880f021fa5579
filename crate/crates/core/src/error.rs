use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum LabError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unsupported representation: {0}")]
    UnsupportedRepresentation(String),

    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("non-finite integrand value at node {node}")]
    Evaluation { node: Complex64 },

    #[error("non-finite mean at r = {radius}")]
    NonFiniteMean { radius: f64 },

    #[error("tolerance not met: best value {best}, last doubling gap {gap}")]
    ToleranceNotMet { best: f64, gap: f64 },

    #[error("norm appears divergent: {0}")]
    NormDivergent(String),

    #[error("hypothesis violated for {theorem}: {detail}")]
    HypothesisViolation { theorem: String, detail: String },
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
