use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed textual input. `line`/`column` are 1-based; 0 means unknown.
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("exponent vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("relation `{relation}` is not weighted-homogeneous: `{first}` has degree {first_degree}, `{second}` has degree {second_degree}")]
    Inhomogeneous {
        relation: String,
        first: String,
        first_degree: u32,
        second: String,
        second_degree: u32,
    },

    #[error("quotient is not Artinian within weighted degree {searched}")]
    NotArtinian { searched: u32 },

    #[error("generators are not minimal: {0}")]
    NotMinimal(String),

    #[error("hypothesis {property} fails: {detail}")]
    Hypothesis { property: String, detail: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("{element} is not invertible in {field}")]
    NotInvertible { element: String, field: String },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
