use thiserror::Error;

/// Errors raised by the matrix and inequality routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must have at least one row")]
    Empty,

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("eigenvalue {eigenvalue} is outside the domain of `{function}` ({domain})")]
    Domain {
        function: String,
        eigenvalue: f64,
        domain: String,
    },

    #[error("eigendecomposition did not converge for a {0}x{0} matrix")]
    Decomposition(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    #[error("not a density matrix: {0}")]
    NotDensity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
