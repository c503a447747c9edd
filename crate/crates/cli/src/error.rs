use thiserror::Error;

/// Failure classes, mapped to exit codes 2 and 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 1,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl From<rdkernel::Error> for CliError {
    fn from(e: rdkernel::Error) -> Self {
        use rdkernel::Error as E;
        match e {
            E::NonConvergence { .. }
            | E::Overflow { .. }
            | E::Quadrature(_)
            | E::JetSingularity { .. } => CliError::Numerical(e.to_string()),
            E::Domain { .. } | E::Pole { .. } | E::NoClosedForm { .. } | E::InvalidParameter(_) => {
                CliError::Usage(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Usage(format!("csv: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(format!("json: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
