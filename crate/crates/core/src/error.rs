use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported pole structure: {0}")]
    UnsupportedPoleStructure(String),
    #[error("no rational solution of the Riccati equation was found; the equation is outside the reducible case handled here")]
    NoRationalRiccatiSolution,
    #[error("supplied Riccati solution does not satisfy u' + u^2 = q")]
    InvalidRiccatiSolution,
    #[error("computed basis of the Lie subspace does not commute: {0}")]
    NoncommutingBasis(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("well-definedness failure: {0}")]
    WellDefinednessFailure(String),
    #[error("consistency violation: {0}")]
    ConsistencyViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
