use plasmon_pair::Error as CoreError;

/// Failures surfaced by the runner, split by exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Nothing to run; the usage text is printed; exit status 1.
    #[error("{0}")]
    Usage(String),
    /// Bad configuration or parameters; exit status 1.
    #[error("{0}")]
    Validation(String),
    /// A numerical check or computation failed; exit status 2.
    #[error("{0}")]
    Numerical(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Validation(_) | CliError::Io { .. } => 1,
            CliError::Numerical(_) => 2,
        }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter(_)
            | CoreError::Domain(_)
            | CoreError::Unsupported(_)
            | CoreError::Validation(_)
            | CoreError::Configuration(_) => CliError::Validation(e.to_string()),
            CoreError::NoConvergence { .. }
            | CoreError::BudgetExhausted { .. }
            | CoreError::Singular(_)
            | CoreError::Measurement(_)
            | CoreError::Fit(_) => CliError::Numerical(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
