use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Error type shared by every module in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A cell could not be parsed; names the 1-based data row and the column.
    #[error("row {row}, column `{column}`: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    /// A record (or the dataset as a whole) violates an invariant.
    #[error("record `{record}`: {message}")]
    Validation { record: String, message: String },

    /// Dimension mismatch between two arrays that must agree.
    #[error("{context}: expected {expected}, got {actual}")]
    Shape {
        context: String,
        expected: usize,
        actual: usize,
    },

    /// An argument lies outside the mathematical domain of an operation.
    #[error("{0}")]
    Domain(String),

    #[error("need at least {needed} records, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// Loss became non-finite during an iterative fit.
    #[error("training diverged at epoch {epoch}")]
    TrainingDiverged { epoch: usize },

    #[error("no trial produced a finite validation score")]
    NoViableArchitecture,

    /// A model file carries an unexpected format tag or version.
    #[error("unsupported model file: expected {expected}, found {found}")]
    ModelFormat { expected: String, found: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("model file: {0}")]
    ModelEncoding(String),
}

impl Error {
    pub fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    pub fn shape(context: impl Into<String>, expected: usize, actual: usize) -> Self {
        Error::Shape {
            context: context.into(),
            expected,
            actual,
        }
    }

    pub fn validation(record: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            record: record.into(),
            message: message.into(),
        }
    }
}
