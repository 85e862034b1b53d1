use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Two operands were built for different rings, moduli or dimensions.
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),

    /// A parameter set or key set that cannot be used as configured.
    #[error("configuration error: {0}")]
    Config(String),

    /// An input outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! mismatch {
    ($($arg:tt)*) => { $crate::error::Error::ParameterMismatch(format!($($arg)*)) };
}

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}

macro_rules! config {
    ($($arg:tt)*) => { $crate::error::Error::Config(format!($($arg)*)) };
}

pub(crate) use {config, domain, mismatch};
