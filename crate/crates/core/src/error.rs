use thiserror::Error;

/// Errors shared by every solver in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed instance, matching, or solver arguments.
    #[error("invalid input: {0}")]
    Input(String),
    /// A configured budget (variables, nodes, enumeration size) was exceeded.
    #[error("budget exceeded: {what} (limit {limit})")]
    Budget { what: String, limit: u64 },
    /// The instance is outside the structural class a solver handles.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A state that the correctness argument rules out.
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub(crate) fn budget(what: impl Into<String>, limit: u64) -> Self {
        Error::Budget {
            what: what.into(),
            limit,
        }
    }

    /// True for errors caused by resource limits rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
