use thiserror::Error;

/// Errors raised by the algebra, state and statistics routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("curvature must be finite and non-negative, got {0}")]
    InvalidCurvature(f64),

    #[error("occupation number {n} outside 0..={max}")]
    LevelOutOfRange { n: usize, max: usize },

    #[error("j0 = {j0} is not on the half-integer grid -{half}..={half}", half = *n_max as f64 / 2.0)]
    OffGridJ0 { j0: f64, n_max: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Mandel parameter undefined for the vacuum (mean photon number is zero)")]
    UndefinedMandel,

    #[error("quadrature did not converge: estimated error {estimate:e} after {evaluations} evaluations")]
    QuadratureNotConverged { estimate: f64, evaluations: usize },

    #[error("invalid quadrature settings: {0}")]
    InvalidQuadrature(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
