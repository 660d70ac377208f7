use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Both Rabi frequencies vanish, so the mixing angle is undefined.
    #[error("degenerate pulse: Omega_p = Omega_s = 0, mixing angle undefined")]
    DegeneratePulse,

    #[error("quadrature did not converge: estimated error {error_estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    QuadratureFailure { error_estimate: f64, tolerance: f64 },

    /// `|sin gamma|` fell below the synthesis threshold, so `cot gamma` blows up.
    #[error("singular angle: |sin gamma| = {sin_gamma:.3e} at t = {t} us")]
    SingularAngle { t: f64, sin_gamma: f64 },

    #[error("invalid epsilon {0}: must lie in (0, pi/2)")]
    InvalidEpsilon(f64),

    #[error("invalid delta {0}: must lie in (0, pi/2]")]
    InvalidDelta(f64),

    #[error("invalid duration {0}: t_f must be finite and positive")]
    InvalidDuration(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state is not normalized: norm^2 = {0}")]
    NotNormalized(f64),

    #[error("step-halving check failed: deviation {deviation:.3e} exceeds tolerance {tolerance:.3e} at {n_steps} steps")]
    StepSizeError {
        n_steps: usize,
        deviation: f64,
        tolerance: f64,
    },
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DegeneratePulse | Error::QuadratureFailure { .. } | Error::StepSizeError { .. }
        )
    }
}
