use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A term constant in the mean anomaly reached `integrate_m`.
    #[error("integrand has a term independent of the mean anomaly: {0}")]
    NonPeriodicIntegrand(String),

    #[error("singular evaluation: {factor} = {value:e} is below the 1e-12 guard")]
    SingularEvaluation { factor: &'static str, value: f64 },

    #[error("Kepler equation did not converge for M = {mean_anomaly}, e = {eccentricity}")]
    NoConvergence {
        mean_anomaly: f64,
        eccentricity: f64,
    },

    #[error("integrator step failure at t = {t}: {reason}")]
    StepFailure { t: f64, reason: String },

    #[error("degenerate reference state: |r x v| = {0:e}")]
    DegenerateState(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("frame mismatch: artifact is a function of {expected} elements, got {found}")]
    FrameMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("theory artifacts missing: {0}")]
    MissingArtifact(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
