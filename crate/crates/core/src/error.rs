use thiserror::Error;

/// Errors raised anywhere in the toolkit.
///
/// The variants line up with the CLI exit codes: verification failures are
/// `1`, precondition and configuration problems `2`, resource caps `3`.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("resource cap exceeded: {what} needs {required}, cap is {cap}")]
    Resource {
        what: String,
        required: u128,
        cap: u128,
    },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(
        "cannot guarantee choice at level {level}: |Y|={y}, |Y'|={y_prime}, \
         excluded pairs={excluded} of {total}"
    )]
    CannotGuaranteeChoice {
        level: usize,
        y: usize,
        y_prime: usize,
        excluded: usize,
        total: usize,
    },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Verification(_) => 1,
            Error::Resource { .. } => 3,
            _ => 2,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
