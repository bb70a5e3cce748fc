use thiserror::Error;

/// Errors raised by the algebra, tower and weave layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported prime {0}; only 2, 3 and 5 are supported")]
    UnsupportedPrime(u64),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not a p-th power")]
    NotAPthPower,
    #[error("linear system has no solution")]
    NoSolution,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("negative valuation: residue undefined")]
    NegativeValuation,
    #[error("precision budget exceeded after {0} reduction steps")]
    PrecisionExceeded(usize),
    #[error("index {index} out of range for word of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid gene: {0}")]
    InvalidGene(String),
    #[error("class violation: {0}")]
    ClassViolation(String),
    #[error("insufficient witness depth: need {need}, have {have}")]
    InsufficientWitness { need: u32, have: u32 },
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("bad phi: valuation must be negative")]
    BadPhi,
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(usize, usize),
    #[error("trace left the base field")]
    NotInBase,
    #[error("weave data missing for level {0}")]
    CertificateMissing(usize),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("non-integral ghost division (internal)")]
    NonIntegrality,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
