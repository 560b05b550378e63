use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Precondition(String),
    #[error("tolerance exceeded: {0}")]
    Tolerance(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Tolerance(_) => 4,
            CliError::Numerical(_) => 5,
        }
    }
}

impl From<dbhom::Error> for CliError {
    fn from(e: dbhom::Error) -> Self {
        if e.is_precondition() {
            CliError::Precondition(e.to_string())
        } else if matches!(e, dbhom::Error::ToleranceExceeded { .. }) {
            CliError::Tolerance(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("output: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Config(format!("output: {e}"))
    }
}
