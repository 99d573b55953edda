use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero vector has no primitive form")]
    ZeroVector,

    #[error("affine domain mismatch: cannot combine Z-map with Q-map")]
    DomainMismatch,

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("value {0} is not an integer")]
    NotIntegral(String),

    #[error("counter value {value} outside [0, {bound}]")]
    CounterOutOfRange { value: String, bound: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed instance: {0}")]
    Malformed(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("witness does not replay: {0}")]
    Replay(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
