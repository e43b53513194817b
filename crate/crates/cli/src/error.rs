use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("config file {path}: {source}")]
    ConfigFile { path: String, source: toml::de::Error },

    #[error("check failed: {0}")]
    Check(String),

    #[error(transparent)]
    Core(#[from] steane_rc::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 1 for failed checks and runtime errors, 2 for invalid configuration.
    pub fn exit_code(&self) -> ExitCode {
        use steane_rc::Error as E;
        match self {
            CliError::Config(_) | CliError::ConfigFile { .. } => ExitCode::from(2),
            CliError::Core(E::Spec(_) | E::OutOfRange { .. } | E::Infeasible(_)) => ExitCode::from(2),
            _ => ExitCode::from(1),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

pub fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
