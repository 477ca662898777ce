use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix [[{0}]] does not have determinant 1")]
    NotUnimodular(String),

    #[error("word is not reduced: letters {0} and {1} at position {2} belong to the same factor")]
    NonReducedWord(String, String, usize),

    #[error("unknown letter `{0}` (expected S, U or U2)")]
    UnknownLetter(String),

    #[error("{0} is not in T+")]
    NotInTPlus(String),

    #[error("form {0} is not positive definite")]
    NotPositiveDefinite(String),

    #[error("H(D) is undefined for D = {0}: need D >= 0 and D = 0 or 3 mod 4")]
    InvalidDiscriminant(i64),

    #[error("matrix {0} is not elliptic")]
    NotElliptic(String),

    #[error("matrix {0} must have positive determinant")]
    NonPositiveDeterminant(String),

    #[error("n must be at least 1, got {0}")]
    InvalidN(i64),

    #[error("coset label {label} is not valid for n = {n}")]
    InvalidCosetLabel { n: u64, label: String },

    #[error("y must be positive, got {0}")]
    NonPositiveY(String),

    #[error("point ({0}, {1}) lies below the half-plane y >= 1")]
    BelowHalfPlane(String, String),

    #[error("point location did not terminate within {0} descent steps")]
    DepthExceeded(usize),

    #[error("{0} fixes infinity")]
    FixesInfinity(String),

    #[error("cannot parse `{0}` as an exact rational")]
    ParseRational(String),

    #[error("cannot parse `{0}`: {1}")]
    Parse(String, String),

    #[error("degenerate viewport: {0}")]
    DegenerateViewport(String),
}

pub type Result<T> = std::result::Result<T, Error>;
