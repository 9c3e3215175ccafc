//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Two operands live on different band limits / grid sizes.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// A metric or cocycle parameter violates its admissibility constraints.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A diffeomorphism lost strict monotonicity or a root bracket failed.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// A time integration blew up; `t` is the last valid time.
    #[error("numerical divergence at t = {t}: {detail}")]
    Divergence { t: f64, detail: String },

    /// Shooting failed to converge; `residual` is the best endpoint residual.
    #[error("steering failed (residual {residual:.3e}): {detail}")]
    Steering { residual: f64, detail: String },

    /// Input data fails a precondition (boundary values, residual checks, ...).
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
