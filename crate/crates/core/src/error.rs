use thiserror::Error;

/// Failure classes shared by every engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Exhaustive enumeration would exceed the configured bit budget.
    #[error("enumeration needs {bits} free bits but the budget is {budget}")]
    ResourceLimit { bits: u32, budget: u32 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
