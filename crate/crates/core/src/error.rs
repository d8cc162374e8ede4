use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {order} exceeds the configured limit {limit}")]
    FieldTooLarge { order: u64, limit: u64 },
    #[error("element encoding {enc} out of range for a field of order {order}")]
    EncodingOutOfRange { enc: u64, order: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot normalize the zero vector")]
    ZeroVector,
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dual vectors are linearly dependent; rank 2 required")]
    RankDeficient,
    #[error("enumeration of {count} {what} exceeds the configured ceiling {limit}")]
    EnumerationBound {
        what: &'static str,
        count: u128,
        limit: u128,
    },
    #[error("arithmetic overflow while evaluating an exact count")]
    CountOverflow,
    #[error("non-integral division: {num} / {den}")]
    NonIntegralDivision { num: i128, den: i128 },
    #[error("Gram matrix is not conjugate-symmetric at ({row},{col})")]
    NotConjugateSymmetric { row: usize, col: usize },
    #[error("Gram matrix is singular")]
    SingularGram,
    #[error("point is not on the variety")]
    PointOffVariety,
    #[error("cone vertex meets the base")]
    VertexMeetsBase,
    #[error("operation requires s = {expected}, but the space has s = {got}")]
    UnsupportedDimension { expected: usize, got: usize },
    #[error("s must be at least {min} (got {got})")]
    DimensionTooSmall { min: usize, got: usize },
    #[error("replacement point {index} does not lie on the pivot line")]
    ReplacementOffLine { index: usize },
    #[error("the pivot line does not lie in the tangent plane at the vertex")]
    LineNotInTangentPlane,
    #[error("replacement equals the base section; the construction would be the identity")]
    ReplacementIsBase,
    #[error("replacement must contain exactly {expected} points, got {got}")]
    ReplacementSize { expected: usize, got: usize },
    #[error("the hyperplane family is empty")]
    EmptyFamily,
    #[error("set universe {got} does not match the space ({expected})")]
    UniverseMismatch { expected: usize, got: usize },
    #[error("file header mismatch: expected `{expected}`, found `{found}`")]
    HeaderMismatch { expected: String, found: String },
    #[error("malformed input at line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
