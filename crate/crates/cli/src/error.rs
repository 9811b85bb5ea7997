use thiserror::Error;

use excirot_core::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{0}")]
    Physics(CoreError),

    #[error("{0}")]
    Infeasible(CoreError),

    #[error("verification failed")]
    Verify,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Infeasible { .. } => CliError::Infeasible(e),
            CoreError::InvalidParameter(msg) => CliError::Config(msg),
            CoreError::MissingBaseline | CoreError::NonMonotoneGrid => CliError::Config(e.to_string()),
            other => CliError::Physics(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Physics(_) | CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Verify => 4,
        }
    }
}
