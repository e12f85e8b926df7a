use thiserror::Error;

use crate::words::Letter;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("morphism is not prolongable on {seed}: {reason}")]
    NotProlongable { seed: Letter, reason: String },

    #[error("explicit word has {available} letters, {requested} requested")]
    ExplicitTooShort { requested: usize, available: usize },

    #[error("block code has no image for letter {0}")]
    MissingCode(Letter),

    #[error("cannot lift: {0}")]
    Lift(String),

    #[error("morphism has no image for letter {0}")]
    MissingImage(Letter),

    #[error("integer overflow while {0}")]
    Overflow(&'static str),

    #[error("factor (start {start}, length {len}) outside a prefix of length {available}")]
    FactorOutOfRange {
        start: usize,
        len: usize,
        available: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed word description: {0}")]
    WordDocument(String),

    #[error("retry cap of {retries} exhausted; last modulus {modulus:?}")]
    RetryCapExhausted { retries: u32, modulus: Vec<i64> },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
