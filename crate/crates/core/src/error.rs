use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic levels differ: {0} vs {1}")]
    LevelMismatch(u64, u64),
    #[error("{0} is not coprime to the level {1}")]
    NotCoprime(i64, u64),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("expected {expected} exponents, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("character set is not closed under Galois conjugation")]
    NotClosed,
    #[error("field degree exceeds the configured bound {0}")]
    DegreeBoundExceeded(usize),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamentalDiscriminant(i64),
    #[error("B_1 is requested for an even character")]
    EvenCharacter,
    #[error("B_1 is requested for the principal character")]
    PrincipalCharacter,
    #[error("field is not CM: {0}")]
    NotCm(String),
    #[error("unit index not decided by any supported rule for {0}")]
    Unsupported(String),
    #[error("h^- is not a positive integer: {0}")]
    NonIntegralResult(String),
    #[error("{0} is not a subfield of {1}")]
    NotSubfield(String, String),
    #[error("relative degree {0} is even")]
    EvenIndex(usize),
    #[error("not a V4-extension of CM type: {0}")]
    NotV4Cm(String),
    #[error("fields do not have coprime prime-power conductors: {0}")]
    NotPrimePowerConductors(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at byte {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },
}
