use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("series does not converge: {0}")]
    Divergence(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("singular point: {0}")]
    Singular(String),
    #[error("precision mismatch: {0}")]
    PrecisionMismatch(String),
    #[error("checksum mismatch in {file}: recorded {recorded}, computed {computed}")]
    Checksum { file: String, recorded: String, computed: String },
    #[error("{file}:{line}: {msg}")]
    Parse { file: String, line: usize, msg: String },
    #[error("inconsistent data: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
