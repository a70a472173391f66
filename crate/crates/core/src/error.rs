//! Error types shared across the crate.

/// Errors raised by parameter validation and runtime contracts.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter is outside its mathematical domain (negative distance,
    /// Nakagami shape below 1/2, negative rate, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Moment matching was asked to fit a distribution with no variance.
    #[error("degenerate distribution: {0}")]
    Degenerate(String),

    /// A caller broke an API contract (empty sample set, mismatched lengths).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A scenario or config file could not be interpreted.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
