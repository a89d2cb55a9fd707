use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: field `{field}`: {message}")]
    MalformedRecord {
        line: usize,
        field: String,
        message: String,
    },

    #[error("duplicate paper id `{0}`")]
    DuplicatePaper(String),

    #[error("unknown author `{0}`")]
    UnknownAuthor(String),

    #[error("graph has no edges; modularity is undefined")]
    EmptyGraph,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A statistic has no defined value for the given input (all-tied
    /// samples, zero variance, empty samples).
    #[error("undefined statistic: {0}")]
    Undefined(String),

    #[error("no focal scientists with at least {min_papers} papers")]
    NoFocalScientists { min_papers: usize },

    #[error("missing upstream artifact {}: run the `{stage}` stage first", path.display())]
    MissingArtifact { path: PathBuf, stage: &'static str },

    #[error("{0} record(s) failed validation")]
    ValidationFailed(usize),

    #[error("io error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Stream(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit status for the command line: 2 for input validation
    /// failures, 3 for missing upstream stages, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ValidationFailed(_) | Error::MalformedRecord { .. } | Error::DuplicatePaper(_) => 2,
            Error::MissingArtifact { .. } => 3,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
