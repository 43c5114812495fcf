use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced by the command-line front end, each with its exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{origin}: {message}")]
    Config { origin: String, message: String },
    #[error("scenario '{scenario}': {source}")]
    Numeric {
        scenario: String,
        #[source]
        source: symform::Error,
    },
    #[error("scenario '{scenario}': {failed} verification check(s) failed")]
    Verification { scenario: String, failed: usize },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(origin: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Config {
            origin: origin.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for bad input or unusable paths, 3 for numeric failure, 4 for failed checks.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } | Self::Io { .. } => 2,
            Self::Numeric { .. } => 3,
            Self::Verification { .. } => 4,
        }
    }
}

/// Library errors raised while a scenario runs: invalid arguments at this
/// stage are still configuration mistakes.
pub(crate) fn numeric(scenario: &str, e: symform::Error) -> CliError {
    match e {
        symform::Error::InvalidArgument(msg) => CliError::config(scenario, msg),
        other => CliError::Numeric {
            scenario: scenario.to_string(),
            source: other,
        },
    }
}
