use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("duplicate id `{id}` at {first} and {second}")]
    DuplicateId {
        id: String,
        first: String,
        second: String,
    },

    #[error("hierarchy error at {path}: {message}")]
    Hierarchy { path: String, message: String },

    #[error("cannot normalize `{raw}`: {reason}")]
    Normalization { raw: String, reason: String },

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("inconsistent input: {0}")]
    Consistency(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV output failed: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn normalization(raw: &str, reason: impl Into<String>) -> Self {
        Error::Normalization {
            raw: raw.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Process exit code used by the command-line front end.
    ///
    /// 1 = usage, 2 = input or schema problem, 3 = numerical or domain failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Schema { .. }
            | Error::DuplicateId { .. }
            | Error::Hierarchy { .. }
            | Error::Normalization { .. }
            | Error::UnknownNode(_)
            | Error::Consistency(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::Csv(_) => 2,
            Error::Domain(_) | Error::Numerical(_) => 3,
            Error::Stage { source, .. } => source.exit_code(),
        }
    }
}
