use std::fmt;
use std::path::PathBuf;

use gridcap_lp::{LpError, SolveStatus};
use thiserror::Error;

/// Input validation failure, optionally located in a file row.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationError {
    pub file: Option<PathBuf>,
    /// 1-based line number including the header line.
    pub line: Option<usize>,
    pub message: String,
}

impl ValidationError {
    pub fn new(message: impl Into<String>) -> Self {
        Self {
            file: None,
            line: None,
            message: message.into(),
        }
    }

    pub fn at(file: impl Into<PathBuf>, line: Option<usize>, message: impl Into<String>) -> Self {
        Self {
            file: Some(file.into()),
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.file, self.line) {
            (Some(file), Some(line)) => write!(f, "{}:{}: {}", file.display(), line, self.message),
            (Some(file), None) => write!(f, "{}: {}", file.display(), self.message),
            _ => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ValidationError {}

#[derive(Debug, Error)]
pub enum GridcapError {
    #[error("validation error: {0}")]
    Validation(#[from] ValidationError),
    #[error("model assembly failed: {0}")]
    Assembly(#[from] LpError),
    /// The solver proved the model infeasible or unbounded.
    #[error("scenario `{scenario}` is {status}: {diagnostic}")]
    NotOptimal {
        scenario: String,
        status: SolveStatus,
        diagnostic: String,
    },
    #[error("solver failure in `{scenario}`: {message}")]
    Solver { scenario: String, message: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Format(String),
}

impl GridcapError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        GridcapError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = GridcapError> = std::result::Result<T, E>;
