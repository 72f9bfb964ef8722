use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CovrepError {
    #[error("shape mismatch in {context}: expected {expected}, got {actual}")]
    Shape {
        context: String,
        expected: String,
        actual: String,
    },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("factorization failed: {0}")]
    FactorizationFailed(String),

    #[error("size cap exceeded: {what} needs dimension {needed}, cap is {cap}")]
    SizeCap {
        what: String,
        needed: usize,
        cap: usize,
    },

    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, CovrepError>;

impl CovrepError {
    pub(crate) fn shape(context: impl Into<String>, expected: impl ToString, actual: impl ToString) -> Self {
        CovrepError::Shape {
            context: context.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }
}
