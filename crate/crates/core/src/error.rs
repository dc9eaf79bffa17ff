use thiserror::Error;

/// Errors raised by the physics and linear-algebra layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("pulse magnitude g must be positive for this quantity")]
    DegeneratePulse,

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("pulse frequency {omega} is not on the 2*omega_b - 2J resonance {resonance}")]
    OffResonance { omega: f64, resonance: f64 },

    #[error("time step {dt} exceeds stability bound {bound} (dt * max|H_ij| must be <= 0.05)")]
    StepTooLarge { dt: f64, bound: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("outcome {outcome} has zero probability")]
    ZeroProbability { outcome: &'static str },

    #[error("outside the distillation regime: {0}")]
    OutOfRegime(String),

    #[error("numerical tolerance breached: {0}")]
    Numerical(String),
}

impl Error {
    /// True for failures caused by arithmetic rather than by bad inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotHermitian { .. }
                | Error::NotNormalized { .. }
                | Error::InvalidDensity(_)
                | Error::Numerical(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
