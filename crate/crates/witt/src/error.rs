use thiserror::Error;

/// Errors shared across the ring, polynomial and Witt layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    /// A coefficient was not divisible by the requested power of p.
    /// Always signals a broken algorithmic invariant, never a valid input.
    #[error("element not divisible by p^{power}")]
    NotDivisible { power: u32 },

    /// An exponent was not divisible by p^r during an inverse Frobenius.
    #[error("polynomial is not a p^{power}-th power (exponent {exponent} not divisible)")]
    NotAPthPower { power: u32, exponent: u32 },

    #[error("arity mismatch: expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
