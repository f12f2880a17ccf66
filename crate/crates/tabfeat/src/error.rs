use std::path::PathBuf;

/// Errors surfaced by pipeline stages. Validation problems exit with code 1,
/// I/O problems with code 2.
#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("{0}")]
    Validation(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Schema { path: PathBuf, line: u64, message: String },

    #[error("{path} not found; run `tabfeat {command}` first")]
    MissingInput { path: PathBuf, command: String },

    #[error(transparent)]
    Core(#[from] tabfeat_core::Error),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Io { .. } | PipelineError::MissingInput { .. } => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        PipelineError::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, PipelineError>;

pub(crate) fn validation(msg: impl Into<String>) -> PipelineError {
    PipelineError::Validation(msg.into())
}
