use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid channel parameters: {0}")]
    InvalidParams(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("invalid insertion pattern: {0}")]
    InvalidPattern(String),

    /// The operation needs a finite repetition bound (or an explicit cap).
    #[error("{0} requires a finite repetition bound r")]
    UnboundedRepetition(&'static str),

    #[error("{what} exceeds budget ({size} > {limit})")]
    BudgetExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("word is not a codeword: {0}")]
    NotCodeword(String),

    #[error("index {index} out of range (code size {size})")]
    IndexOutOfRange { index: String, size: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Something the construction guarantees did not hold. Always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
