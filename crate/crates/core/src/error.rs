use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value {value} is not in the carrier of {quantale}")]
    NotInCarrier { value: f64, quantale: String },

    #[error("quantale mismatch: {0} vs {1}")]
    QuantaleMismatch(String, String),

    #[error("no object satisfies the universal property of {0}")]
    NoSuchObject(String),

    #[error("{0} is not enumerable")]
    NotEnumerable(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid weighting: {0}")]
    InvalidWeighting(String),

    #[error("relation fails transitivity at ({a}, {b}, {c})")]
    ClosureFailure { a: String, b: String, c: String },

    #[error("relation fails reflexivity at {0}")]
    ReflexivityFailure(String),

    #[error("invalid input at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
