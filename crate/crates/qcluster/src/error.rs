use thiserror::Error;

/// Errors produced by qcluster operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point count must be at least 2, got {0}")]
    TooFewPoints(usize),

    #[error("point {point} out of range 1..={n}")]
    InvalidPoint { point: usize, n: usize },

    #[error("invalid pair ({0}, {1})")]
    InvalidPair(usize, usize),

    #[error("weight for pair ({i}, {j}) must be positive and finite, got {w}")]
    InvalidWeight { i: usize, j: usize, w: f64 },

    #[error("scale factor must be positive and finite, got {0}")]
    InvalidScalar(f64),

    #[error("instances have different point counts: {0} vs {1}")]
    ShapeMismatch(usize, usize),

    #[error("k must be between {min} and {max}, got {k}")]
    InvalidK { k: usize, min: usize, max: usize },

    #[error("instance too large for exhaustive oracle: n = {n}, limit {limit}")]
    OracleSize { n: usize, limit: usize },

    #[error("invalid partitioning: {0}")]
    InvalidPartitioning(String),

    #[error("index mapping over the {expected} canonical partitionings is not a permutation")]
    InvalidPermutation { expected: usize },

    #[error("covariance matrix is not symmetric positive-definite")]
    NotPositiveDefinite,

    #[error("edges at positions {0} and {1} are not both inner or both outer")]
    MixedClassSwap(usize, usize),

    #[error("cannot exchange positions {0} and {1}: no admissible weight in the target interval")]
    SwapNotRepresentable(usize, usize),

    #[error("{0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
