use std::path::PathBuf;

/// Failure of a command, grouped by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// Malformed JSON or input that does not fit the schema.
    #[error("schema error: {0}")]
    Schema(String),
    /// The input is well formed but mathematically invalid.
    #[error("validation failed: {0}")]
    Math(String),
    /// A property that should hold for every valid input did not.
    #[error("check failed: {0}")]
    Theorem(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Schema(_) => 1,
            CliError::Math(_) => 2,
            CliError::Theorem(_) => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
