use crate::rational::NumberError;
use crate::setting::SettingError;

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error(transparent)]
    Setting(#[from] SettingError),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("setting not covered: {0}")]
    NotCovered(String),
    #[error("bound exceeded: {0}")]
    Bound(String),
    #[error("constraint has an all-zero normal vector")]
    ZeroNormal,
    #[error("the face is empty")]
    EmptyFace,
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("state is not expressed in its natural-orbital basis (off-diagonal {0:e})")]
    BasisMismatch(f64),
}

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn from_number(line: usize, column_offset: usize, e: NumberError) -> Self {
        Error::Parse {
            line,
            column: column_offset + e.column,
            message: format!("invalid number \"{}\": {}", e.text, e.reason),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
