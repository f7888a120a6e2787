use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// Variants are grouped by the exit code the CLI maps them to: parse errors,
/// precision exhaustion, and everything else (precondition violations).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("truncation degree too small: {0}")]
    TruncationTooSmall(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("residue {0} is not a unit")]
    NonUnitResidue(String),
    #[error("element is not a unit")]
    NonUnit,
    #[error("ring mismatch")]
    RingMismatch,
    #[error("quotient is not of height two: {0}")]
    NotHeightTwo(String),
    #[error("first generator is not of the form t2 - phi(t1)")]
    NotGraphForm,
    #[error("series is not coprime to omega_{0}")]
    NotCoprime(u32),
    #[error("no stable affine-exponential fit")]
    NoStableFit,
    #[error("chain is not nested: {0}")]
    ChainNotNested(String),
    #[error("f1/f2 is a unit")]
    UnitRatio,
    #[error("not a prime element: {0}")]
    NotPrime(String),
    #[error("prime list does not cover the support: {0}")]
    SupportIncomplete(String),
    #[error("quotient is not finite-dimensional")]
    NotFinite,
    #[error("character is trivial")]
    TrivialCharacter,
    #[error("character is even")]
    EvenCharacter,
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("length routes disagree: {0}")]
    RouteDisagreement(String),
}

impl Error {
    /// Exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 1,
            Error::PrecisionExhausted(_) | Error::TruncationTooSmall(_) => 3,
            _ => 2,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::PrecisionExhausted(msg.into())
    }
}
