use thiserror::Error;

/// Errors raised by the library. Every variant maps onto one of three
/// categories used by the command line: validation, resource cap, or an unmet
/// (recoverable) precondition.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{what} exceeds cap {cap} (requested {requested})")]
    CapExceeded {
        what: String,
        cap: u128,
        requested: u128,
    },

    #[error("no qualifying point found at N = {n}; retry with a larger N")]
    NotFoundAtN { n: usize },

    #[error("resolution too coarse: {0}")]
    ResolutionTooCoarse(String),

    #[error("precondition unmet: {0}")]
    Precondition(String),
}

/// Coarse classification used for exit codes and diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Resource,
    Precondition,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidArgument(_)
            | Error::InvalidPartition(_)
            | Error::InvalidCover(_)
            | Error::Config(_) => ErrorKind::Validation,
            Error::CapExceeded { .. } => ErrorKind::Resource,
            Error::NotFoundAtN { .. } | Error::ResolutionTooCoarse(_) | Error::Precondition(_) => {
                ErrorKind::Precondition
            }
        }
    }

    pub(crate) fn cap(what: impl Into<String>, cap: u128, requested: u128) -> Self {
        Error::CapExceeded {
            what: what.into(),
            cap,
            requested,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
