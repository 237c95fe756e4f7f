use thiserror::Error;

/// Errors raised by the capacity engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ring descriptor: {0}")]
    InvalidRing(String),

    #[error("invalid ideal: {0}")]
    InvalidIdeal(String),

    #[error("zero ideal is not allowed here")]
    ZeroIdeal,

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("operands live over different rings")]
    MixedRings,

    #[error("class element does not belong to this ring's class group")]
    MixedClassGroups,

    #[error("localized modules are at different primes ({0} vs {1})")]
    MismatchedPrimes(String, String),

    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("operation unsupported for this backend: {0}")]
    Unsupported(String),

    #[error("factorization exceeded budget while factoring {0}")]
    FactorizationBudget(String),

    #[error("oracle cap exceeded: {0}")]
    OracleCap(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("claimed capacity {claimed} is below requested t = {requested}")]
    CapacityTooSmall { claimed: String, requested: u64 },

    #[error("internal error: witness failed verification ({0})")]
    WitnessRejected(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by a work budget rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::FactorizationBudget(_) | Error::OracleCap(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
