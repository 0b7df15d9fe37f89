use std::path::PathBuf;

/// Errors raised by the library and surfaced by the CLI.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Caller supplied arguments that violate an operation's preconditions.
    #[error("usage error: {0}")]
    Usage(String),

    /// The request is well-formed but outside what this build supports.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A search that would run far too long without a time budget.
    #[error("infeasible without a budget: about {estimate:.3e} candidate sets")]
    Infeasible { estimate: f64 },

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    /// An internal consistency check failed. Always a bug.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
