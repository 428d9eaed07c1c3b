use std::path::PathBuf;

use canonical_growth::Error as NumericError;

#[derive(Debug, thiserror::Error)]
pub enum ToolError {
    #[error("{}{}: {message}", path.display(), line.map(|l| format!(":{l}")).unwrap_or_default())]
    Parse {
        path: PathBuf,
        line: Option<u64>,
        message: String,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

impl ToolError {
    /// 2 for usage and input errors, 3 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            ToolError::Numeric(e) if is_numerical_failure(e) => 3,
            _ => 2,
        }
    }
}

/// Quadrature or tail failures, as opposed to invalid arguments.
pub fn is_numerical_failure(e: &NumericError) -> bool {
    matches!(
        e,
        NumericError::NonConvergence { .. }
            | NumericError::DivergentTail
            | NumericError::DivergentIntegral
    )
}

impl From<csv::Error> for ToolError {
    fn from(e: csv::Error) -> Self {
        ToolError::Output(std::io::Error::other(e))
    }
}

impl From<serde_json::Error> for ToolError {
    fn from(e: serde_json::Error) -> Self {
        ToolError::Output(std::io::Error::other(e))
    }
}

pub type Result<T> = std::result::Result<T, ToolError>;
