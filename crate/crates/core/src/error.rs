use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not divisible")]
    NotDivisible,
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("zero ideal")]
    ZeroIdeal,
    #[error("ideals not coprime")]
    IdealsNotCoprime,
    #[error("no solution")]
    NoSolution,
    #[error("not a commutative unital ring: {0}")]
    NotARing(String),
    #[error("module not of full rank")]
    RankDeficient,
    #[error("sampling budget exhausted")]
    SamplingBudgetExhausted,
    #[error("span not integral")]
    SpanNotIntegral,
    #[error("CRT bound too small")]
    BoundTooSmall,
    #[error("quotient is not cyclic")]
    NonCyclicQuotient,
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("span verification failed")]
    VerifyFailed,
}

pub type Result<T> = std::result::Result<T, Error>;
