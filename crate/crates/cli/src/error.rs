use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input or invalid arguments (exit 2).
    #[error("{0}")]
    Input(String),
    /// Data that cannot support the requested metric (exit 3).
    #[error("{0}")]
    Degenerate(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Degenerate(_) => 3,
        }
    }
}

impl From<apauc::Error> for CliError {
    fn from(e: apauc::Error) -> Self {
        use apauc::Error::*;
        match e {
            DegenerateClass { .. }
            | RandomDenominator
            | DegenerateReplicate { .. }
            | DegenerateScenario(_) => CliError::Degenerate(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
