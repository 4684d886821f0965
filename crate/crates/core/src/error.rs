use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain of an operation (bad dimension, bad time window, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    /// A homological precondition failed; `betti` is the offending Betti number.
    #[error("precondition failed: beta_{degree}({complex}) = {betti}, expected 0")]
    Precondition {
        degree: isize,
        complex: String,
        betti: usize,
    },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("enumeration of {estimate} candidate subsets exceeds the cap of {cap}")]
    CapExceeded { estimate: u128, cap: u128 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("identity violation: {0}")]
    IdentityViolation(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
