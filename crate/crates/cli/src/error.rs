use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] ris_linklab::Error),
    #[error("non-finite result for {0}")]
    NonFinite(String),
    #[error("unknown figure preset `{0}` (expected one of fig2, fig3, fig5, fig6, fig7)")]
    UnknownPreset(String),
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit status: 1 for usage errors, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NonFinite(_) | CliError::Engine(ris_linklab::Error::NonFinite) => 2,
            _ => 1,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
