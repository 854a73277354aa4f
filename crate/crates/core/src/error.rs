//! Error type shared by every module.

use std::path::PathBuf;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A malformed cell or row in a delimited input file.
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: u64,
        msg: String,
    },

    /// A declared column is missing or a file header does not match its contract.
    #[error("schema error: {0}")]
    Schema(String),

    /// Input data violates a precondition (empty file, unknown node, single-class fold, ...).
    #[error("{0}")]
    Data(String),

    /// Tensor operands do not conform for the requested operation.
    #[error("shape mismatch in {op}: {detail}")]
    Shape { op: &'static str, detail: String },

    /// A non-finite value or a failed iterative method.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Power iteration ran out of iterations.
    #[error("power iteration did not converge after {iterations} iterations (last residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// Invalid command line or configuration.
    #[error("usage: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn shape(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Shape {
            op,
            detail: detail.into(),
        }
    }

    /// Process exit code: 1 usage, 2 data, 3 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Parse { .. } | Error::Schema(_) | Error::Data(_) | Error::Io { .. } => 2,
            Error::Shape { .. } | Error::Numerical(_) | Error::NoConvergence { .. } => 3,
        }
    }
}
