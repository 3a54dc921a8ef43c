use thiserror::Error;

pub type Result<T> = std::result::Result<T, FracError>;

#[derive(Debug, Error)]
pub enum FracError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("time nodes are not strictly increasing at index {index}")]
    NonMonotoneNodes { index: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("failed to converge: {0}")]
    ConvergenceFailure(String),

    #[error("missing partial derivative `{0}` and finite-difference fallback is disabled")]
    MissingPartial(&'static str),

    #[error("non-positive weight {field}={value:e} at ({x}, {y}, t={t})")]
    NonPositiveWeight {
        field: &'static str,
        value: f64,
        x: f64,
        y: f64,
        t: f64,
    },

    #[error("linear solver breakdown{}: {reason} after {iterations} iterations, residual {residual:e}", step.map(|s| format!(" at step {s}")).unwrap_or_default())]
    SolverBreakdown {
        reason: String,
        iterations: usize,
        residual: f64,
        step: Option<usize>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("table is empty")]
    EmptyTable,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl FracError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        FracError::InvalidArgument(msg.into())
    }

    /// Attach a time-step index to a solver breakdown.
    pub fn at_step(self, n: usize) -> Self {
        match self {
            FracError::SolverBreakdown {
                reason,
                iterations,
                residual,
                ..
            } => FracError::SolverBreakdown {
                reason,
                iterations,
                residual,
                step: Some(n),
            },
            other => other,
        }
    }
}
