use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: d = {0} must be a squarefree positive integer")]
    InvalidField(i64),
    #[error("invalid discriminant {0}: not a negative fundamental discriminant")]
    InvalidDiscriminant(i64),
    #[error("division by zero in field arithmetic")]
    DivisionByZero,
    #[error("the zero vector has no cone point")]
    ZeroVector,
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("invalid enumeration bound: {0}")]
    InvalidBound(String),
    #[error("minimal-vector bound violated: {0} vectors up to sign")]
    TooManyMinimalVectors(usize),
    #[error("form is not perfect")]
    NotPerfect,
    #[error("supplied functional is not a facet of the perfect cone")]
    NotAFacet,
    #[error("iteration cap of {cap} exhausted in {stage}")]
    IterationCap { stage: &'static str, cap: usize },
    #[error("polytope consistency failure: {0}")]
    Polytope(String),
    #[error("coincident cusps in tetrahedron")]
    CoincidentCusps,
    #[error("missing data for volume identity: {0}")]
    MissingData(String),
    #[error("malformed rational {0:?}")]
    ParseRational(String),
    #[error("malformed report {path}: {reason}")]
    MalformedReport { path: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
