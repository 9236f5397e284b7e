use crate::expr::ExprError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("numerical failure: {0}")]
    Numerical(abe_core::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 1 for bad input, 2 for failures inside the numerics.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 2,
            _ => 1,
        }
    }

    /// Wraps a core error raised while validating user input.
    pub fn invalid_input(e: abe_core::Error) -> Self {
        CliError::Usage(format!("invalid state: {e}"))
    }
}

impl From<abe_core::Error> for CliError {
    fn from(e: abe_core::Error) -> Self {
        CliError::Numerical(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
