use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("segment ({a}, {b}) is out of range for a set of {n} points")]
    InvalidSegment { a: usize, b: usize, n: usize },
    #[error("point set is not in general position: points {0}, {1}, {2} are collinear")]
    NotGeneralPosition(usize, usize, usize),
    #[error("point set of size {n} exceeds the limit of {limit}")]
    SizeLimit { n: usize, limit: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("epsilon {0} produces a degenerate replicated set: {1}")]
    DegenerateEpsilon(String, String),
    #[error("no certified epsilon found after {0} halvings")]
    EpsilonSearchExhausted(usize),
    #[error("segment ({0}, {1}) joins two copies of the same source point")]
    SameSourceSegment(usize, usize),
    #[error("bound library is empty")]
    EmptyLibrary,
    #[error("point set has {got} points, variable map expects {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("assignment violates the signotope axioms in clause {0}")]
    SignotopeViolation(usize),
    #[error("model is incomplete: variable {0} has no value")]
    IncompleteModel(usize),
    #[error("perturbation failed to keep general position after {0} retries")]
    RetryExhausted(usize),
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
