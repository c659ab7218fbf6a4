use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input outside the domain of the operation (non-finite value, group
    /// membership failure, stencil leaving the half-plane, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A computation ran but did not produce a trustworthy number.
    #[error("numeric error: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
