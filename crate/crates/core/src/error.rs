use thiserror::Error;

/// Failure modes shared across the crate.
///
/// `Invalid` covers malformed inputs and violated preconditions; `Hypothesis`
/// covers runtime hypotheses (divisibility windows, congruences) that turned
/// out false for the given data; the remaining variants report bounded
/// searches and desk-scale limits honestly instead of guessing.
#[derive(Debug, Error)]
pub enum Error {
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("division by zero polynomial")]
    ZeroDivisor,
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("no exact solution: {0}")]
    Inconsistent(String),
    #[error("search cutoff exceeded: {0}")]
    Cutoff(String),
    #[error("enumeration cap exceeded: {0}")]
    Cap(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("out of supported range: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
