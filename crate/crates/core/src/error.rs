use thiserror::Error;

/// Errors raised by the exact-arithmetic and decomposition routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible root orders: {left} vs {right}")]
    IncompatibleOrder { left: u32, right: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("hypermatrix does not lie in W_{label}")]
    NotInComponent { label: String },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
