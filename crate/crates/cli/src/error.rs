use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config or parameter combinations.
    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Core(#[from] whittaker_core::Error),

    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }

    /// 2 for verification failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(whittaker_core::Error::Positivity { .. }) => 2,
            _ => 1,
        }
    }
}
