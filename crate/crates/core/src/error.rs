use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A triangulation or scenario object violates a structural invariant.
    #[error("structural error at {object}: {message}")]
    Structure { object: String, message: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: String, found: String },

    #[error("{what} index {index} out of range (valid: {valid})")]
    OutOfRange {
        what: &'static str,
        index: usize,
        valid: String,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Crossing data that cannot be realized in the triangulation.
    #[error("invalid crossing sequence at position {position}: {message}")]
    Crossing { position: usize, message: String },

    /// A computation that the theory guarantees to be consistent was not.
    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("incompatible seed: {0}")]
    Incompatible(String),

    #[error("{}", fmt_scenario(*.line, .message))]
    Scenario { line: Option<usize>, message: String },

    #[error("not found: {0}")]
    NotFound(String),

    #[error("i/o error: {0}")]
    Io(String),
}

fn fmt_scenario(line: Option<usize>, message: &str) -> String {
    match line {
        Some(l) => format!("scenario line {l}: {message}"),
        None => format!("scenario: {message}"),
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn structure(object: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Structure {
            object: object.into(),
            message: message.into(),
        }
    }

    pub(crate) fn crossing(position: usize, message: impl Into<String>) -> Self {
        Error::Crossing {
            position,
            message: message.into(),
        }
    }
}
