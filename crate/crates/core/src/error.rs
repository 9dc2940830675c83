use thiserror::Error;

/// Errors raised by the exact continued fraction operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("depth exceeds float-safe range")]
    FloatUnsafeDepth,
    #[error("domain is {0}")]
    OutOfDomain(&'static str),
    #[error("depth budget exceeded")]
    DepthBudgetExceeded,
    #[error("convergents require finite digits")]
    InfiniteDigit,
    #[error("cylinder base must lie in Σ_n, n ≥ 1")]
    InvalidCylinderBase,
    #[error("sequence is not in Σ")]
    NotInSigma,
    #[error("tail bound valid for K ≥ 4")]
    TailBoundDepth,
    #[error("cannot place samples")]
    CannotPlaceSamples,
    #[error("probe needs at least 3 samples")]
    TooFewSamples,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
