use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no interaction records to build a graph from")]
    EmptyInput,

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("node {0} does not exist in the graph")]
    InvalidNode(usize),

    #[error("unknown node label `{0}`")]
    UnknownLabel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("adjacency matrix has no edges")]
    ZeroMatrix,

    #[error("node `{0}` has no vulnerability attribute")]
    MissingAttribute(String),

    #[error("need at least 3 nodes carrying the proxy attribute, found {found}")]
    InsufficientData { found: usize },

    #[error("correlation undefined: one of the variables has zero variance")]
    UndefinedCorrelation,

    #[error("baseline is degenerate (empty traditional union or zero spread)")]
    DegenerateBaseline,

    #[error("report has no overlap section to emit")]
    NothingToEmit,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Process exit code: 1 usage error, 2 data error, 3 internal error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_) | Error::Config { .. } => 1,
            Error::Stage { source, .. } => source.exit_code(),
            Error::EmptyInput
            | Error::Parse { .. }
            | Error::InvalidNode(_)
            | Error::UnknownLabel(_)
            | Error::ZeroMatrix
            | Error::MissingAttribute(_)
            | Error::InsufficientData { .. }
            | Error::UndefinedCorrelation
            | Error::DegenerateBaseline
            | Error::NothingToEmit
            | Error::Io { .. }
            | Error::Json { .. } => 2,
        }
    }
}
