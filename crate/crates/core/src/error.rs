use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument out of supported range: {0}")]
    Range(String),

    #[error("invalid domain specification: {0}")]
    Domain(String),

    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("solver failed: {msg} (best residual {best_residual:e})")]
    Solver { msg: String, best_residual: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn solver(msg: impl Into<String>, best_residual: f64) -> Self {
        Error::Solver {
            msg: msg.into(),
            best_residual,
        }
    }
}
