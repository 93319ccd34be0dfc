use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("polynomial does not divide exactly")]
    Divisibility,

    #[error("polynomial has a repeated root (zero discriminant)")]
    RepeatedRoot,

    /// Newton-Raphson hit a point where the derivative vanishes.
    #[error("derivative vanishes{}", match .step { Some(s) => format!(" at step {s}"), None => String::new() })]
    DerivativeZero { step: Option<usize> },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("resource limit exceeded: {what} needs {required}, cap is {cap}")]
    ResourceLimit {
        what: &'static str,
        required: u64,
        cap: u64,
    },

    #[error("insufficient CRT capacity: need more than {required_bits} bits, primes give {available_bits}")]
    Capacity {
        required_bits: u64,
        available_bits: u64,
    },

    /// The CRT approximation error straddles a bit boundary.
    #[error("bit is indeterminate at the configured truncation length")]
    IndeterminateBit,

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
