use thiserror::Error;

/// Errors produced by lattice computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The input violates a documented precondition.
    #[error("input error: {0}")]
    Input(String),
    /// A lattice expression failed to parse.
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    /// Glue vectors do not pair integrally or break evenness.
    #[error("glue incompatibility: {0}")]
    GlueIncompatible(String),
    /// A glue vector lies in the span of the lattice and earlier glue.
    #[error("redundant glue: {0}")]
    GlueRedundant(String),
    /// A search exceeded its node or wall-clock budget.
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// An internal invariant failed; indicates a bug.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
