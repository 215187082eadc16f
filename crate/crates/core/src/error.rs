use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("leaf count mismatch: domain tree has {domain} leaves, range tree has {range}, permutation acts on {perm}")]
    LeafCountMismatch {
        domain: usize,
        range: usize,
        perm: usize,
    },
    #[error("not a permutation: {0}")]
    BadPermutation(String),
    #[error("prefix too short: consumed {consumed} bits but the domain tree needs more")]
    PrefixTooShort { consumed: usize },
    #[error("word contains a bit other than 0/1: {0:?}")]
    BadBit(char),
    #[error("rotation numbers are defined for elements of T; this element reduces into V")]
    NotInT,
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("family parameter out of range: {0}")]
    BadFamilyParameter(String),
    #[error("generator derivation failed validation: {0}")]
    ValidationFailed(String),
    #[error("empty word")]
    EmptyWord,
    #[error("unary order pipeline produced period {period} not divisible by the word length {word_len}")]
    PeriodNotDivisible { period: usize, word_len: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
