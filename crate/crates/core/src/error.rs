use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid base {0}: expected b >= 2")]
    InvalidBase(u64),

    #[error("cannot combine elements of Q(zeta_{left}) and Q(zeta_{right})")]
    FieldMismatch { left: u32, right: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("index {index} out of range 0..{len}")]
    OutOfRange { index: u64, len: u64 },

    #[error("{what} needs {needed} summand evaluations, above the cap of {cap}")]
    CostExceeded {
        what: &'static str,
        needed: u128,
        cap: u64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
