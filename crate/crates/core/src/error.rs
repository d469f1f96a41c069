use std::fmt;

use thiserror::Error;

/// Why a matrix failed the density-operator test. Reported for the first failed condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityDiagnostic {
    NotSquare { rows: usize, cols: usize },
    NotHermitian { deviation: f64 },
    TraceNotOne { trace: f64 },
    Negative { min_eigenvalue: f64 },
}

impl fmt::Display for DensityDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, not square"),
            Self::NotHermitian { deviation } => {
                write!(f, "not Hermitian (max |M_ij - conj(M_ji)| = {deviation:e})")
            }
            Self::TraceNotOne { trace } => write!(f, "trace is {trace}, expected 1"),
            Self::Negative { min_eigenvalue } => {
                write!(
                    f,
                    "not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})"
                )
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid subsystem layout: {0}")]
    InvalidLayout(String),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),

    #[error("not a density operator: {0}")]
    NotDensityOperator(DensityDiagnostic),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("not a projector: {0}")]
    NotProjector(String),

    #[error("invalid subsystem selection: {0}")]
    InvalidSubsystems(String),

    #[error("Bloch vector has length {0}, which exceeds 1")]
    BlochOutOfRange(f64),

    #[error("outcome has zero probability ({0:e})")]
    ZeroProbability(f64),

    #[error("{what} = {value} is outside the supported range {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("cloning channel is not universal: {0}")]
    NonUniversal(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ensemble definition: {0}")]
    EnsembleDefinition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True when the error comes from a numerical invariant failing during a computation
    /// rather than from bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Self::NotDensityOperator(_)
                | Self::NotHermitian(_)
                | Self::NotProjector(_)
                | Self::ZeroProbability(_)
                | Self::NonUniversal(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
