use thiserror::Error;

use crate::geom::GeomError;
use crate::numeric::NumericError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("budget exhausted while computing {what} (reached depth {depth_reached})")]
    BudgetExhausted { what: String, depth_reached: usize },
    #[error("depth {depth_reached} insufficient for {what}")]
    DepthInsufficient { what: String, depth_reached: usize },
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e.to_string())
    }
}

impl LabError {
    /// Process exit code used by the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Inconsistency(_) | LabError::Geom(GeomError::NotSimple(..)) => 2,
            LabError::BudgetExhausted { .. } => 3,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            LabError::Numeric(_) => "numeric",
            LabError::Geom(_) => "geometry",
            LabError::InvalidParameters(_) => "invalid_parameters",
            LabError::Precondition(_) => "precondition",
            LabError::Degenerate(_) => "degenerate",
            LabError::BudgetExhausted { .. } => "budget_exhausted",
            LabError::DepthInsufficient { .. } => "depth_insufficient",
            LabError::Inconsistency(_) => "inconsistency",
            LabError::Config(_) => "config",
            LabError::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
