use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent user input.
    #[error("input error: {0}")]
    Input(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The request is well-formed but outside what we agree to compute
    /// (enumeration bounds, the hard side of the dichotomy, ...).
    #[error("refused: {0}")]
    Refusal(String),

    /// An oracle returned answers that no function in the claimed class can
    /// produce (non-integral or negative recovered counts).
    #[error("oracle inconsistency: {0}")]
    OracleInconsistency(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    pub(crate) fn refusal(msg: impl Into<String>) -> Self {
        Error::Refusal(msg.into())
    }

    pub(crate) fn inconsistent(msg: impl Into<String>) -> Self {
        Error::OracleInconsistency(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
