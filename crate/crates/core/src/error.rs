use thiserror::Error;

use crate::params::Regime;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("input contains non-finite values")]
    NonFinite,

    #[error("invalid spectral interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("infeasible {regime} regime: {reason}")]
    InfeasibleRegime { regime: Regime, reason: String },

    #[error("instance violates the {regime} regime: {reason}")]
    RegimeViolation { regime: Regime, reason: String },

    #[error("invalid positive map: {0}")]
    InvalidMap(String),

    #[error("vector is not a unit vector (norm {norm})")]
    NotUnitVector { norm: f64 },

    #[error("vectors are not orthogonal (|<x,y>| = {overlap:e})")]
    NotOrthogonal { overlap: f64 },

    #[error("{0} is singular")]
    RankDeficient(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no feasible grid point for {0}")]
    EmptyGrid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn infeasible(regime: Regime, reason: impl Into<String>) -> Self {
        Error::InfeasibleRegime {
            regime,
            reason: reason.into(),
        }
    }

    pub(crate) fn violation(regime: Regime, reason: impl Into<String>) -> Self {
        Error::RegimeViolation {
            regime,
            reason: reason.into(),
        }
    }

    /// True for errors caused by parameters outside a theorem's hypotheses.
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::InfeasibleRegime { .. } | Error::EmptyGrid(_))
    }
}
