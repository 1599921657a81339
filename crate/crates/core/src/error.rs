use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Library error. Every variant maps to a stable machine-readable code via [`Error::code`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid convex set: {0}")]
    InvalidSet(String),

    #[error("level {inner} is not contained in level {outer} (excess {excess:.3e})")]
    NotNested { outer: usize, inner: usize, excess: f64 },

    #[error("level {level} is empty")]
    EmptyLevel { level: usize },

    #[error("support values increase from level {level} to {next} in direction {direction} (by {excess:.3e})", next = .level + 1)]
    NotMonotone { level: usize, direction: usize, excess: f64 },

    #[error("scale factor must be nonnegative, got {0}")]
    NegativeScale(f64),

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("atom {atom} is not centered (|gs| = {norm:.3e})")]
    NotCentered { atom: usize, norm: f64 },

    #[error("set is not centered (|gs| = {norm:.3e})")]
    ShapeNotCentered { norm: f64 },

    #[error("solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    SolverDidNotConverge { iterations: usize, residual: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("set is not in the Hukuhara set of the sample: {0}")]
    Infeasible(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::GridMismatch(_) => "grid_mismatch",
            Error::InvalidGrid(_) => "invalid_grid",
            Error::InvalidSet(_) => "invalid_set",
            Error::NotNested { .. } => "not_nested",
            Error::EmptyLevel { .. } => "empty_level",
            Error::NotMonotone { .. } => "not_monotone",
            Error::NegativeScale(_) => "negative_scale",
            Error::InvalidSample(_) => "invalid_sample",
            Error::NotCentered { .. } => "not_centered",
            Error::ShapeNotCentered { .. } => "shape_not_centered",
            Error::SolverDidNotConverge { .. } => "solver_did_not_converge",
            Error::InvalidConfig(_) => "invalid_config",
            Error::Infeasible(_) => "infeasible",
            Error::Parse(_) => "parse_error",
        }
    }
}
