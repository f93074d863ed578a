//! Std side of algodyn: instance file formats, the experiment harness with
//! its ensemble statistics, and the command line.

pub mod cli;
pub mod formats;
pub mod harness;
pub mod stats;

pub use algodyn_core as core;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("resource cutoff reached: {0}")]
    Cutoff(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Core(#[from] algodyn_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("bad JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV output: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit status: 1 invalid input, 2 resource cutoff, 3 internal.
    pub fn exit_code(&self) -> i32 {
        use algodyn_core::Error as E;
        match self {
            Error::Invalid(_) | Error::Io(_) | Error::Json(_) => 1,
            Error::Core(E::InvalidParameters(_) | E::Domain(_)) => 1,
            Error::Cutoff(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
