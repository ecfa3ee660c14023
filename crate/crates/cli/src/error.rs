use std::path::Path;

use thiserror::Error;

/// Input and usage errors. Every variant maps to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),

    #[error("malformed matrix document: {0}")]
    Malformed(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix asymmetry {0:.3e} exceeds the limit 1e-4")]
    Asymmetric(f64),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] opconvex::Error),

    #[error("{path}: {source}")]
    InFile {
        path: String,
        #[source]
        source: Box<CliError>,
    },
}

impl CliError {
    pub fn in_file(self, path: &Path) -> Self {
        CliError::InFile {
            path: path.display().to_string(),
            source: Box::new(self),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
