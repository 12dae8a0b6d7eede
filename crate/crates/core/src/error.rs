use std::path::PathBuf;

use crate::model::Diagnostic;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("instance failed validation with {} error(s)", .0.iter().filter(|d| d.is_error()).count())]
    Validation(Vec<Diagnostic>),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("unbounded: {0}")]
    Unbounded(String),

    #[error("simplex stalled after {iterations} iterations")]
    NumericalFailure { iterations: usize },

    #[error("enumeration over {horizon} periods exceeds the limit of {limit}")]
    EnumerationTooLarge { horizon: usize, limit: usize },

    #[error("solution is fractional: {variable} = {value}")]
    FractionalSolution { variable: String, value: f64 },

    #[error("node limit of {nodes} reached without an incumbent")]
    NodeLimit { nodes: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
