use switchstab_core::Error as CoreError;
use thiserror::Error;

/// Failures mapped onto the process exit-code contract.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Inapplicable(String),
    #[error("{0}")]
    Resource(String),
    #[error("{0}")]
    NonConvergence(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => 1,
            CliError::Inapplicable(_) => 2,
            CliError::Resource(_) => 3,
            CliError::NonConvergence(_) => 4,
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::ConeInapplicable(_) | CoreError::UnsupportedDimension(_) => {
                CliError::Inapplicable(msg)
            }
            CoreError::HorizonTooLarge { .. } | CoreError::NodeCapExceeded(_) => {
                CliError::Resource(msg)
            }
            CoreError::Overflow(_) => {
                CliError::NonConvergence(format!("lambda not certifiable: {msg}"))
            }
            CoreError::NotCertifiable(_) | CoreError::Lp(_) => CliError::NonConvergence(msg),
            _ => CliError::Input(msg),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
