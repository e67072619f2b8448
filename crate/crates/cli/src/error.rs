use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("degenerate dark space: {0}")]
    Degenerate(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
            CliError::Degenerate(_) => 4,
        }
    }
}

impl From<stirap_core::Error> for CliError {
    fn from(e: stirap_core::Error) -> Self {
        use stirap_core::Error as E;
        match e {
            E::IntegrationFailure { .. } | E::NonPhysical(_) | E::ImpossibleOutcome { .. } => {
                CliError::Numerical(e.to_string())
            }
            E::AmbiguousDarkSpace { .. } | E::UndefinedDarkState => CliError::Degenerate(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e.to_string()))
    }
}
