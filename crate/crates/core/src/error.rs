use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A structural invariant of an instance does not hold.
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("{what} exceeds enumeration guard ({size} > {limit})")]
    GuardExceeded { what: &'static str, size: u128, limit: u64 },

    #[error("non-integral {what}: {value}")]
    NonIntegral { what: String, value: f64 },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("unknown id `{0}`")]
    UnknownId(String),

    #[error("integration table of node `{node}` has no entry for {tuple:?}")]
    MissingTableEntry { node: String, tuple: Vec<i64> },

    #[error("parse error at {path} (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown problem type `{0}`")]
    UnknownProblemType(String),

    #[error("unsupported spec_version {0}")]
    UnsupportedVersion(u64),
}

impl Error {
    pub(crate) fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Prefixes the path of an [`Error::Invalid`] with an enclosing location.
    pub(crate) fn within(self, prefix: &str) -> Self {
        match self {
            Error::Invalid { path, message } => Error::Invalid {
                path: if path.is_empty() {
                    prefix.to_string()
                } else {
                    format!("{prefix}.{path}")
                },
                message,
            },
            other => other,
        }
    }
}
