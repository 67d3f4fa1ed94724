//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by constructors, preconditions, and iterative solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two operands that must share a dimension do not.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A matrix expected to be Hermitian is not, within tolerance.
    #[error("matrix is not Hermitian: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { residual: f64, tol: f64 },

    /// A matrix expected to have unit trace does not, within tolerance.
    #[error("matrix trace is not 1: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotUnitTrace { residual: f64, tol: f64 },

    /// A vector expected to be normalized is not, within tolerance.
    #[error("vector is not normalized: |norm - 1| = {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotNormalized { residual: f64, tol: f64 },

    /// A matrix expected to be a rank-1 projector fails the idempotence test.
    #[error("matrix is not a rank-1 projector: idempotence residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotRankOne { residual: f64, tol: f64 },

    /// An eigensolve succeeded but the top eigenvalue is not where the caller
    /// requires it.
    #[error("top eigenvalue {eigenvalue} is not within {tol:.3e} of 1")]
    EigenvalueOutsideWindow { eigenvalue: f64, tol: f64 },

    /// An iterative solver ran out of iterations.
    #[error("no convergence within {max_iterations} iterations (best residual {residual:.3e})")]
    NoConvergence { max_iterations: usize, residual: f64 },

    /// A construction is only defined for prime dimensions.
    #[error("dimension {d} is not prime")]
    NotPrime { d: usize },

    /// A dimension falls outside the range an operation supports.
    #[error("dimension {d} is outside the supported range {min}..={max}")]
    UnsupportedDimension { d: usize, min: usize, max: usize },

    /// Structurally invalid input to a constructor, with a description of the
    /// offending part.
    #[error("malformed input: {0}")]
    MalformedInput(String),

    /// A search configuration that cannot be run.
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
