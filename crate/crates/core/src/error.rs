//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("Fock truncation too small: {0}")]
    TruncationTooSmall(String),

    #[error("matrix is not flagged/verified Hermitian: {0}")]
    NotHermitian(String),

    #[error("eigensolver failed to converge: {0}")]
    ConvergenceFailure(String),

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("unknown sector label `{0}`")]
    UnknownLabel(String),

    #[error("analytic form requires parameter conditions that do not hold: {0}")]
    ConditionsViolated(String),

    #[error("phase/{0}")]
    PhaseMismatch(String),

    #[error("ground energy not converged over the given truncation sequence (last delta {last_delta:.3e})")]
    NotConverged { last_delta: f64 },

    #[error("state is not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("need at least {needed} uniformly spaced points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("curve carries no usable feature: {0}")]
    TooFewFeatures(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parameter file error: {0}")]
    ParamFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
