use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed text input; `token` is the offending fragment.
    #[error("parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },

    /// A precondition of the operation does not hold (for example an
    /// indefinite intersection form handed to Laufer's algorithm).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Laufer's algorithm ran past its configured step budget.
    #[error("step guard tripped after {0} steps")]
    StepGuard(u64),

    /// Exhaustive search found no witness for a statement that is a theorem.
    #[error("lemma violation: {0}")]
    LemmaViolation(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
