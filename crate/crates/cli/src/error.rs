use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable files, malformed JSON or arguments.
    #[error("input error: {0}")]
    Input(String),
    #[error("{0}")]
    Engine(#[from] getzler_core::Error),
    #[error("selfcheck failed")]
    SelfcheckFailed,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::SelfcheckFailed => 1,
            CliError::Input(_) => 2,
            CliError::Engine(getzler_core::Error::InvalidRational(_)) => 2,
            CliError::Engine(_) => 3,
        }
    }
}
