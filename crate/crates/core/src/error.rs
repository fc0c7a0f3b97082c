use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid factor dimensions {dims:?}: every factor must be positive and at least one factor is required")]
    InvalidFactorDims { dims: Vec<usize> },

    #[error("entry count {found} does not match matrix side {side} (expected {} entries)", side * side)]
    EntryCount { side: usize, found: usize },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("factor dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: Vec<usize>,
        found: Vec<usize>,
    },

    #[error("factor position {position} out of range for {factors} factor(s)")]
    FactorOutOfRange { position: usize, factors: usize },

    #[error("partial trace needs at least two factors, operator has {factors}")]
    TooFewFactors { factors: usize },

    #[error(
        "operator is not Hermitian: ||A - A^dagger||_F = {asymmetry:.3e} exceeds {tolerance:.3e}"
    )]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("trace {trace:.12} differs from 1 by more than {tolerance:.3e}")]
    TraceNotUnit { trace: f64, tolerance: f64 },

    #[error("minimum eigenvalue {min_eigenvalue:.3e} is below -{tolerance:.3e}")]
    NotPositive { min_eigenvalue: f64, tolerance: f64 },

    #[error("observable must act on a single factor, got dims {dims:?}")]
    NotSingleFactor { dims: Vec<usize> },

    #[error("operator norm {norm:.12} exceeds 1 + {tolerance:.3e}")]
    NormExceeded { norm: f64, tolerance: f64 },

    #[error("dimension d = {d} not supported: {reason}")]
    UnsupportedDimension { d: usize, reason: &'static str },

    #[error("{images:?} is not a permutation of (1, 2, 3)")]
    InvalidPermutation { images: [usize; 3] },

    #[error("invalid marginal pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("eigendecomposition did not converge")]
    EigenFailure,

    #[error("matrix text format, line {line}: {message}")]
    Parse { line: usize, message: String },
}
