use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("subspace is not contained in the larger one")]
    NotContained,
    #[error("d∘d ≠ 0 in degree {0}")]
    NotAComplex(i64),
    #[error("not a chain map in degree {0}")]
    NotAChainMap(i64),
    #[error("invalid filtration: {0}")]
    Filtration(String),
    #[error("map does not preserve the filtration at level {level}, degree {degree}")]
    NotFiltered { level: i64, degree: i64 },
    #[error("square face does not commute: {0}")]
    NotCommuting(String),
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error("naturality fails: {0}")]
    Naturality(String),
    #[error("invalid scenario at {path}: {reason}")]
    Scenario { path: String, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn scenario(path: impl Into<String>, reason: impl Into<String>) -> Error {
        Error::Scenario { path: path.into(), reason: reason.into() }
    }
}
