use thiserror::Error;

use crate::rational::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series offsets differ: {left} vs {right}")]
    OffsetMismatch { left: Box<Rational>, right: Box<Rational> },

    #[error("series offset {0} outside [0, 1)")]
    OffsetOutOfRange(Rational),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid triple (a, b, N) = ({a}, {b}, {n}): {reason}")]
    InvalidTriple { a: u64, b: u64, n: u64, reason: String },

    #[error("indicial polynomial vanishes at shift n = {n}")]
    IndicialCollision { n: usize },

    #[error("minimal weight k0 = {0} is not an integer")]
    NonIntegralWeight(Rational),

    #[error("not in the span of F0, DF0: {0}")]
    NotInSpan(String),

    #[error("weight mismatch: {0}")]
    WeightMismatch(String),

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
}
