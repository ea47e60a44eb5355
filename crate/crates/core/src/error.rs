use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the admissible domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error on `{key}`: {reason}")]
    Config { key: String, reason: String },

    /// Non-finite or otherwise unusable intermediate value.
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("no bound state: {0}")]
    NoBoundState(String),

    /// The detected cut structure does not fit the requested condition.
    #[error("cut structure error: {0}")]
    Structure(String),

    #[error("degenerate (zero-width) cut at x = {0}")]
    DegenerateCut(f64),

    /// Violated precondition of a caller (e.g. a bracket without sign change).
    #[error("logic error: {0}")]
    Logic(String),

    #[error("search error: {0}")]
    Search(String),

    #[error("state is not bound (E = {energy})")]
    Unbound { energy: f64 },

    #[error("not converged: {0}")]
    NotConverged(String),

    #[error("parse error at position {position}: {reason}")]
    Parse { position: usize, reason: String },

    #[error("fit error: {0}")]
    Fit(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable reason code used in report rows.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Config { .. } => "config",
            Error::Numeric(_) => "numeric",
            Error::NoBoundState(_) => "no_bound_state",
            Error::Structure(_) => "structure",
            Error::DegenerateCut(_) => "degenerate_cut",
            Error::Logic(_) => "logic",
            Error::Search(_) => "search",
            Error::Unbound { .. } => "unbound",
            Error::NotConverged(_) => "not_converged",
            Error::Parse { .. } => "parse",
            Error::Fit(_) => "fit",
            Error::Unsupported(_) => "unsupported",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn config(key: &str, reason: impl Into<String>) -> Self {
        Error::Config { key: key.to_string(), reason: reason.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
