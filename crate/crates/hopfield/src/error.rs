//! Error type shared by the network core (energy, dynamics, diagnostics).

use thiserror::Error;

/// Errors raised by the core associative-memory operations.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum CoreError {
    /// Vector or matrix dimensions do not agree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An input vector was empty.
    #[error("input vector must be nonempty")]
    EmptyInput,

    /// An input contained NaN or infinity.
    #[error("input contains a nonfinite value")]
    NonFinite,

    /// The inverse temperature must be a positive finite real.
    #[error("inverse temperature must be positive and finite, got {0}")]
    InvalidBeta(f64),

    /// A vector expected on the probability simplex was not on it.
    #[error("vector is not on the probability simplex (sum deviates by {deviation:e})")]
    NotOnSimplex { deviation: f64 },

    /// A cluster index set was empty.
    #[error("cluster index set must be nonempty")]
    EmptyCluster,

    /// A pattern index was out of range.
    #[error("pattern index {index} out of range for {count} patterns")]
    IndexOutOfRange { index: usize, count: usize },

    /// A cluster index set contained a duplicate.
    #[error("cluster index set contains duplicate index {0}")]
    DuplicateIndex(usize),

    /// A causal mask had the wrong length.
    #[error("mask length {got} does not match pattern count {expected}")]
    MaskLengthMismatch { expected: usize, got: usize },

    /// A causal mask excluded every position.
    #[error("mask excludes every stored pattern")]
    MaskExcludesAll,

    /// Iteration/config parameters were invalid.
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}
