use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {re}+{im}i is not in the upper half-plane (need Im > {floor})")]
    NotInUpperHalfPlane { re: f64, im: f64, floor: f64 },

    #[error("matrix [[{a},{b}],[{c},{d}]] has determinant {det}, expected 1")]
    BadDeterminant { a: i128, b: i128, c: i128, d: i128, det: i128 },

    #[error("integer overflow in matrix arithmetic")]
    Overflow,

    #[error("element {0} does not lie in group {1}")]
    NotInGroup(String, String),

    #[error("word of length {len} exceeds the configured cap {cap}")]
    WordTooLong { len: usize, cap: usize },

    #[error("unknown group preset `{0}`")]
    UnknownPreset(String),

    #[error("unknown cusp `{0}`")]
    UnknownCusp(String),

    #[error("insufficient precision: {required} coefficients needed, {available} stored")]
    InsufficientPrecision { required: usize, available: usize },

    #[error("quadrature did not converge within {budget} nodes (error estimate {estimate:e})")]
    QuadratureNonConvergence { budget: usize, estimate: f64 },

    #[error("alphabet or order mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("path endpoints do not match: {0}")]
    PathMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("weight {0} not supported: Poincare series need even k >= 4")]
    UnsupportedWeight(i64),
}

pub type Result<T> = std::result::Result<T, Error>;
