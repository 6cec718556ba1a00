use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}:{line}: parse error: {msg}")]
    Parse {
        path: PathBuf,
        line: u64,
        msg: String,
    },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("measure {measure} requires parameter `{param}`")]
    MissingParam {
        measure: &'static str,
        param: &'static str,
    },

    #[error("{measure} requires trajectories of equal length, got {left} and {right}")]
    LengthMismatch {
        measure: &'static str,
        left: usize,
        right: usize,
    },

    #[error("{measure} is undefined for an empty trajectory")]
    EmptyTrajectory { measure: &'static str },

    #[error("{measure} requires timestamped trajectories")]
    TimestampsRequired { measure: &'static str },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("measure {measure} is not in the {class} class")]
    WrongClass {
        measure: &'static str,
        class: &'static str,
    },

    #[error("pair {index}: {source}")]
    BatchPair {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("run exceeded the time limit")]
    Timeout,

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
