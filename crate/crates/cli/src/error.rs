use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write {}: {message}", path.display())]
    Write { path: PathBuf, message: String },

    #[error("malformed JSON in {source_name}: {message}")]
    Parse { source_name: String, message: String },

    #[error("unknown family `{family}`; supported families: {supported}")]
    UnknownFamily { family: String, supported: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] mlsi_core::Error),
}

impl CliError {
    /// 2 when a theorem's hypotheses are not met, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(mlsi_core::Error::Hypothesis { .. }) => 2,
            _ => 1,
        }
    }
}
