use thiserror::Error;

/// Errors raised by graph construction, analysis and the Ising tools.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The graph splits into at least two components; `first` and `second`
    /// are representative nodes of two of them.
    #[error("graph is disconnected: node {first} (component of size {first_size}) cannot reach node {second} (component of size {second_size})")]
    Disconnected {
        first: usize,
        first_size: usize,
        second: usize,
        second_size: usize,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn capacity(msg: impl Into<String>) -> Error {
    Error::Capacity(msg.into())
}
