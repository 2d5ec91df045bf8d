use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("root solver did not converge after {iterations} iterations (worst residual {worst_residual:e})")]
    NoConvergence {
        iterations: usize,
        worst_residual: f64,
    },

    /// Minimum step reached while the collision guard was still violated.
    #[error("step underflow at t = {t}: root collision at or near this parameter")]
    StepUnderflow { t: f64 },

    #[error("loop passes through or near the discriminant locus (step underflow at t = {t})")]
    CollisionOnLoop { t: f64 },

    #[error("loop is not closed: coefficient defect {defect:e} exceeds {tolerance:e}")]
    NotClosed { defect: f64, tolerance: f64 },

    #[error("coefficients are not periodic: defect {defect:e} exceeds {tolerance:e}")]
    PeriodicityViolated { defect: f64, tolerance: f64 },

    #[error("branches x{j} and x{k} are not separated at t = {t}")]
    SeparationFailure { t: f64, j: usize, k: usize },

    #[error("integration step {h} too large: h * max|lambda| = {product} exceeds 0.1")]
    StepTooLarge { h: f64, product: f64 },

    #[error("unknown preset '{0}'")]
    NotFound(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
