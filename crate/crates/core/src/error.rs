//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by matrix I/O, kernel construction, and alignment metrics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("k out of range: k={k}, need 2 <= k <= {max}")]
    KOutOfRange { k: usize, max: usize },

    #[error("mismatched neighbor count: {0}; use mka_naive for kernels with different row sums")]
    MismatchedK(String),

    #[error("dense evaluation guard exceeded: n={n} > {guard}")]
    DenseGuard { n: usize, guard: usize },

    #[error("degenerate kernel: {0}")]
    DegenerateKernel(String),

    #[error("zero median distance: all retained pairs coincide")]
    ZeroMedian,

    #[error("sequence length mismatch: {a} vs {b}")]
    LengthMismatch { a: usize, b: usize },

    #[error("all pairs tied: rank correlation undefined")]
    AllTies,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
