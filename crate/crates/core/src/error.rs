//! Error type shared by every module.

use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point is not in the open simplex: {0}")]
    NotInterior(String),
    #[error("point is not on the interior of exactly one facet")]
    NotOnFacet,
    #[error("operation supports n = {expected} only, got n = {got}")]
    UnsupportedDimension { expected: usize, got: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid step size {0}")]
    InvalidStep(f64),
    #[error("location is not a fixed point (residual {0:e})")]
    NotAFixedPoint(f64),
    #[error("iteration did not converge: {0}")]
    NoConvergence(String),
    #[error("(t1, t2) = ({0}, {1}) is outside the marginal polytope")]
    OutOfPolytope(i64, i64),
    #[error("state must be strictly positive, got {0:?}")]
    NonPositiveState(Vec<f64>),
    #[error("state lies on the simplex boundary: {0:?}")]
    BoundaryState(Vec<f64>),
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
