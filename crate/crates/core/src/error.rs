use thiserror::Error;

/// Errors produced by the exact-arithmetic engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ZeroVector: cannot make the zero vector primitive")]
    ZeroVector,

    #[error("DegenerateCone: generators are linearly dependent")]
    DegenerateCone,

    #[error("DegenerateFace: points are affinely dependent")]
    DegenerateFace,

    #[error("InvalidSimplex: {0}")]
    InvalidSimplex(String),

    #[error("InvalidProfile: {0}")]
    InvalidProfile(String),

    #[error("LevelError: cyclotomic levels {0} and {1} do not match")]
    LevelError(u64, u64),

    #[error("OrderMismatch: series truncation orders {0} and {1} do not match")]
    OrderMismatch(usize, usize),

    #[error("DivisionByZero: inverse of zero requested")]
    DivisionByZero,

    #[error("PoleAtZero: coth shift requires a nonintegral angle")]
    PoleAtZero,

    #[error("NotRational: element has nonzero coordinates outside the rational line")]
    NotRational,

    #[error("FaceDependence: faces of dimension {dim} disagree on b_{dim}: {details}")]
    FaceDependence { dim: usize, details: String },

    #[error("NoProfileMatches: no convention profile reproduces the oracle on the corpus")]
    NoProfileMatches,

    #[error("AmbiguousProfile: {0} convention profiles reproduce the oracle on the corpus")]
    AmbiguousProfile(usize),

    #[error("NotCoprime: dedekind sum requires coprime arguments")]
    NotCoprime,

    #[error("DilationPositive: dilation factor must be a positive integer")]
    DilationPositive,

    #[error("UnknownFace: no face with vertex set {0}")]
    UnknownFace(String),
}

pub type Result<T> = std::result::Result<T, Error>;
