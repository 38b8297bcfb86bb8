use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// Cholesky met a pivot below `1e-14 * ||A||`.
    #[error("matrix {matrix} is not positive definite (pivot {pivot:e} at row {row})")]
    NotPositiveDefinite {
        matrix: String,
        row: usize,
        pivot: f64,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// `μ_min = μ_max = 0`: `T` vanishes on the whole space and GSOR with
    /// `α = 1` is already exact.
    #[error("degenerate spectrum: mu_min = mu_max = 0")]
    DegenerateSpectrum,

    #[error("insufficient data: need at least {needed} entries, found {found}")]
    InsufficientData { needed: usize, found: usize },

    #[error("right-hand side is zero")]
    ZeroRightHandSide,

    #[error("scaling (beta={beta}, delta={delta}) is invalid: {reason}")]
    ScalingInvalid { beta: f64, delta: f64, reason: String },

    #[error("problem generation failed: {0}")]
    Generation(Box<Error>),
}

impl Error {
    /// Renames the matrix reported by a [`Error::NotPositiveDefinite`].
    pub fn for_matrix(self, name: &str) -> Self {
        match self {
            Error::NotPositiveDefinite { row, pivot, .. } => Error::NotPositiveDefinite {
                matrix: name.to_string(),
                row,
                pivot,
            },
            other => other,
        }
    }
}
