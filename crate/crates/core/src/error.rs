use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input (lengths, degrees, literals).
    #[error("input error: {0}")]
    Input(String),

    /// The request is well-formed but outside what the engine supports.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An operation was called on data violating its precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The Gröbner s-pair budget ran out before the computation finished.
    #[error("step budget of {budget} s-pairs exceeded")]
    BudgetExceeded { budget: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Input(format!("malformed document: {e}"))
    }
}
