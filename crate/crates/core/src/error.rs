use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A caller-supplied parameter is outside its domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A state violates a physical constraint (symmetry, positivity, uncertainty).
    #[error("invalid state: {0}")]
    InvalidState(String),
    /// The inputs make the requested quantity undefined (e.g. a zero denominator).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    /// A computed result failed its own consistency check.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid_arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
