use thiserror::Error;

/// Errors produced by the synthesis library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix data has {found} entries, expected {expected}")]
    BadLength { expected: usize, found: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not unitary: ||U^dag U - I||_F = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not normal: ||M^dag M - M M^dag||_F = {deviation:e}")]
    NotNormal { deviation: f64 },

    #[error("cosine-sine decomposition needs an even dimension, got {0}")]
    OddDimension(usize),

    #[error("invalid Pauli string `{0}`")]
    InvalidPauli(String),

    #[error("Pauli terms `{0}` and `{1}` do not commute")]
    NonCommuting(String, String),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("line {line}: {message} (at `{token}`)")]
    Parse {
        line: usize,
        token: String,
        message: String,
    },

    #[error("unknown template `{0}`")]
    UnknownTemplate(String),

    #[error("template {name} takes {expected} parameter(s), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("unknown gate name `{0}`")]
    UnknownGate(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
