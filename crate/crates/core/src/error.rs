use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A point lies outside the open unit ball (or too close to its boundary).
    #[error("domain error: {0}")]
    Domain(String),
    /// A parameter violates the hypothesis of the operation it feeds.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// A symbol or integrand could not be evaluated.
    #[error("evaluation error: {0}")]
    Evaluation(String),
    /// The requested configuration is not implemented (e.g. tensor rules for n = 3).
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
