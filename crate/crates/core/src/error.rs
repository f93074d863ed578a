use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// Parameters outside an operation's domain (k > n, negative ratio, ...).
    InvalidParameters(String),
    /// A randomized construction gave up after its retry budget.
    GenerationFailure(String),
    /// A formula was evaluated outside the region where it is defined.
    Domain(String),
    /// The characteristic fan did not bracket the surface maximum.
    Resolution(String),
    /// A solver was driven into a state its contract forbids.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameters(m) => write!(f, "invalid parameters: {m}"),
            Error::GenerationFailure(m) => write!(f, "generation failure: {m}"),
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Resolution(m) => write!(f, "resolution error: {m}"),
            Error::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl core::error::Error for Error {}

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::Error::InvalidParameters(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid;
