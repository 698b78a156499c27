use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A sieve (or similarly sized table) was requested past its cap.
    #[error("requested sieve limit {requested} exceeds cap {cap}")]
    SieveCapExceeded { requested: u64, cap: u64 },

    /// A query landed outside the range a table was built for.
    #[error("argument {x} is outside the sieve range 1..={limit}")]
    OutOfSieveRange { x: u64, limit: u64 },

    /// Arithmetic functions of different value kinds cannot be combined.
    #[error("mixed value kinds: {left} vs {right}")]
    MixedValueKinds {
        left: &'static str,
        right: &'static str,
    },

    /// A transform was evaluated outside its polydisc of convergence.
    #[error("coordinate {index} lies outside the polydisc of convergence")]
    OutsidePolydisc { index: usize },

    /// The weight exponent is below the convergence threshold of an operation.
    #[error("weight exponent beta={beta} must exceed {min}")]
    BetaTooSmall { beta: f64, min: f64 },

    /// An internal consistency assertion failed (two routes to the same
    /// quantity disagreed); always a bug or a numerically broken input.
    #[error("internal consistency failure: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
