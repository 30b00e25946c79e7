//! Error type shared by all modules.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the quaternion algebra, trajectory preprocessing,
/// learning and rollout code.
///
/// Numeric payloads are reported as `f64` regardless of the crate scalar.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The logarithmic map was evaluated within tolerance of the antipode of
    /// identity, where the projection is ill-posed.
    #[error("antipodal configuration: logarithmic map is undefined at the antipode of identity")]
    Antipodal,

    /// A tangent vector left the bijective domain of the exponential map.
    #[error("tangent vector norm {norm} is outside the exponential-map domain (must be < pi)")]
    Domain { norm: f64 },

    /// An iterative routine did not reach its tolerance.
    #[error("no convergence after {iterations} iterations (residual {residual})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// A kernel received (almost) no activation over the training data.
    #[error("kernel {kernel} received total activation {activation}, below the coverage threshold")]
    InsufficientCoverage { kernel: usize, activation: f64 },

    /// Input data is structurally unusable (too short, non-increasing, ...).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Integration step violates the stability guard.
    #[error("integration step too large: dt*Omega = {dt_omega} exceeds the stability guard {guard}")]
    StepTooLarge { dt_omega: f64, guard: f64 },

    /// A text input (CSV row, config line) failed to parse.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("model document error: {0}")]
    Model(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Model(e.to_string())
    }
}
