use thiserror::Error;

/// Errors raised by the toolkit.
///
/// The variants map onto the CLI exit codes: `Numerical` is a tolerance
/// failure (exit 3), everything else is a domain or precondition problem
/// with the input (exit 2).
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural precondition on the input does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A POVM or protocol breaks its own contract (completeness, alternation, ...).
    #[error("contract violated: {0}")]
    Contract(String),

    /// A computed quantity missed its tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}
macro_rules! precondition {
    ($($arg:tt)*) => { $crate::error::Error::Precondition(format!($($arg)*)) };
}
macro_rules! numerical {
    ($($arg:tt)*) => { $crate::error::Error::Numerical(format!($($arg)*)) };
}
macro_rules! contract {
    ($($arg:tt)*) => { $crate::error::Error::Contract(format!($($arg)*)) };
}
pub(crate) use {contract, domain, numerical, precondition};
