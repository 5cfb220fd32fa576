use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("variable {var} is out of range for arity {g}")]
    IndexOutOfRange { var: String, g: usize },

    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("matrix dimension mismatch: expected {expected}x{expected}, got {rows}x{cols}")]
    DimensionMismatch {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("degree {degree} is not divisible by block size {delta}")]
    DeltaDoesNotDivide { degree: usize, delta: usize },

    #[error("word lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("tensor is not symmetric: entries of {a:?} and {b:?} differ by {diff:e}")]
    Asymmetric { a: Vec<u32>, b: Vec<u32>, diff: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("complex coefficient {0} not allowed in real mode")]
    ComplexInRealMode(String),
}

pub type Result<T> = std::result::Result<T, Error>;
