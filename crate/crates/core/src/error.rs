use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("the zero polynomial is not a valid argument here")]
    ZeroPolynomial,

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("invalid deformation model: {0}")]
    InvalidModel(String),

    #[error("abelianization map does not kill relator {relator}: image {image:?}")]
    InconsistentAbelianization { relator: usize, image: Vec<i64> },

    #[error("representation image of generator {0} is not invertible")]
    NonInvertible(usize),

    #[error("representation does not satisfy relator {0}")]
    RelationViolated(usize),

    #[error("operator does not square to zero at degree {0}")]
    NotADifferential(usize),

    #[error("spectral sequence invariant violated: {0}")]
    InvariantViolation(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("parse error: {0}")]
    Parse(String),
}
