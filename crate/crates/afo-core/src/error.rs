use thiserror::Error;

/// Unified error type for the whole library.
#[derive(Debug, Error)]
pub enum Error {
    /// A value violated a documented precondition (non-finite entry, empty input, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two objects that must agree in dimension do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An objective has no unique minimizer (singular Hessian, collinear samples, ...).
    #[error("degenerate objective: {0}")]
    DegenerateObjective(String),

    /// An optimizer or scenario configuration is unusable.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// No convergence certificate exists for the requested parameters.
    #[error("no certificate: {0}")]
    NoCertificate(String),

    /// A rate fit could not be performed (trajectory converged at the seed, too few points).
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// A document (scenario, certificate, CSV) could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Filesystem failure; the offending path is kept in the message.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl Error {
    /// Attach a path to a raw I/O error.
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
