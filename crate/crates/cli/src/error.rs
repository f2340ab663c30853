use isb_core::IsbError;
use isb_ed::EdError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("not converged: {0}")]
    NotConverged(String),
}

impl CliError {
    /// Process exit code of the error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::NotConverged(_) => 3,
        }
    }
}

impl From<IsbError> for CliError {
    fn from(e: IsbError) -> Self {
        match e {
            IsbError::NotConverged { .. } => CliError::NotConverged(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<EdError> for CliError {
    fn from(e: EdError) -> Self {
        match e {
            EdError::NotConverged { .. } | EdError::StepRejected { .. } => CliError::NotConverged(e.to_string()),
            EdError::Io(io) => CliError::Io(io),
            EdError::Params(p) => p.into(),
            _ => CliError::Config(e.to_string()),
        }
    }
}
