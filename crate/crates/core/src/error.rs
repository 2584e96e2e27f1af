use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vectors are rank deficient (Gram determinant {gram_det:e} below threshold)")]
    RankDeficient { gram_det: f64 },
    #[error("zero vector where a direction is required")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("singular linear system")]
    Singular,
    #[error("warping function must be positive, got f = {0}")]
    NonPositiveWarping(f64),
    #[error("profile kind `{0}` cannot be evaluated away from its base point")]
    ProfileNotEvaluable(String),
    #[error("invalid structure tensor: {0}")]
    InvalidStructure(String),
    #[error("tangent dimension m = {0} is too small (need m >= 2)")]
    DimensionTooSmall(usize),
    #[error("vector is not unit length (norm {0})")]
    NotUnit(f64),
    #[error("finite-difference step {0:e} outside [1e-7, 1e-3]")]
    StepOutOfRange(f64),
    #[error("restricted Hessian is not {expected} (extreme eigenvalue {eigenvalue:e})")]
    Indefinite { expected: &'static str, eigenvalue: f64 },
    #[error("constrained problem is unbounded in the requested direction")]
    Unbounded,
    #[error("point is not Ricci-flat in the tested direction (Ric = {ricci:e}, tolerance {tol:e})")]
    NotRicciFlat { ricci: f64, tol: f64 },
    #[error("class predicate `{class}` violated: {detail}")]
    ClassPredicate { class: String, detail: String },
    #[error("impossible scenario: {0}")]
    Scenario(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
