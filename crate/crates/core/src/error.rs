use thiserror::Error;

/// Errors raised by the operators, states, liftings and measures modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    NotNormalized { trace: f64 },

    #[error("non-finite entry at position {0}")]
    NonFinite(usize),

    #[error("environment dimension {de} is smaller than the state rank {rank}")]
    InsufficientEnvironment { de: usize, rank: usize },

    #[error("Kraus family is not normalized (deviation {deviation:e})")]
    KrausNormalization { deviation: f64 },

    #[error(
        "lift table entry for q = {q} does not have marginal delta_q (deviation {deviation:e})"
    )]
    BadLiftEntry { q: usize, deviation: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("constraint violated: {0}")]
    Constraint(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }
}
