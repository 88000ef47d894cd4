use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{function} is undefined at {arg}: {reason}")]
    Domain {
        function: &'static str,
        arg: f64,
        reason: &'static str,
    },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("circulant embedding failed: minimum eigenvalue {min_eigenvalue:e} below tolerance and the sequential fallback is not positive definite")]
    Embedding { min_eigenvalue: f64 },

    #[error("parameters fall outside the supported expansion regions: {0}")]
    UnsupportedRegion(String),

    #[error("series did not converge: tail estimate {tail:e} above tolerance {tolerance:e} after {terms} terms")]
    NonConvergence {
        tail: f64,
        tolerance: f64,
        terms: u64,
    },

    #[error("replicate {index}: {source}")]
    Replicate {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {reason}")]
    Parse { path: PathBuf, reason: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable tag used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::Domain { .. } => "domain",
            Error::InsufficientData(_) => "insufficient_data",
            Error::Degenerate(_) => "degenerate_input",
            Error::Embedding { .. } => "embedding",
            Error::UnsupportedRegion(_) => "unsupported_region",
            Error::NonConvergence { .. } => "non_convergence",
            Error::Replicate { source, .. } => source.kind(),
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
        }
    }
}
