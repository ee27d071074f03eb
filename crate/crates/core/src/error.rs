use thiserror::Error;

use crate::group::GroupElement;

/// Errors raised by the library. Numeric payloads are widened to `f64`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("torsion order {0} is invalid (must be at least 2)")]
    InvalidTorsionOrder(i64),

    #[error("negative free rank {0}")]
    NegativeRank(i64),

    #[error("element does not belong to the group {expected}: {detail}")]
    GroupMismatch { expected: String, detail: String },

    #[error("integer overflow while computing {0}")]
    Overflow(String),

    #[error("enumeration of {requested} elements exceeds the cap of {cap}")]
    EnumerationCap { requested: u128, cap: u64 },

    #[error("weight undefined at {at:?}: {detail}")]
    WeightDomain { at: GroupElement, detail: String },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("weight is not submultiplicative: w({x:?} + {y:?}) / (w(x) w(y)) = {ratio}")]
    NotSubmultiplicative { x: GroupElement, y: GroupElement, ratio: f64 },

    #[error("weight drops below 1 at {at:?} (w = {value}); the w >= 1 normalization is violated")]
    WeightBelowOne { at: GroupElement, value: f64 },

    #[error("convolution power support exceeds the cap of {cap} terms; largest power reached is {largest_n}")]
    SupportCap { cap: usize, largest_n: u64 },

    #[error("sampling too coarse: {given} samples per circle, at least {required} required")]
    SamplingTooCoarse { given: usize, required: usize },

    #[error("aliasing: {0}")]
    Aliasing(String),

    #[error("characters {a} and {b} too close: condition estimate {condition:e} exceeds {cap:e}")]
    IllConditioned { a: usize, b: usize, condition: f64, cap: f64 },

    #[error("invalid character: {0}")]
    InvalidCharacter(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Io(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
