//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by the numeric core.
///
/// The two broad classes matter to callers: invalid inputs (bad parameters,
/// wrong dimensions) and numeric assertions that failed at runtime
/// (non-convergence, anisotropy, grid under-resolution). The CLI maps the
/// former to exit code 2 and the latter to exit code 3.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric (asymmetry {asymmetry:.3e} exceeds tolerance)")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("singular matrix in {0}")]
    Singular(&'static str),

    #[error("polynomial degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("state is not normalized (integral deviates by {deviation:.3e})")]
    Unnormalized { deviation: f64 },

    #[error("{context} failed to converge (residual {residual:.3e})")]
    Convergence { context: &'static str, residual: f64 },

    #[error("reduced single-mode Gaussian is anisotropic (deviation {deviation:.3e})")]
    Anisotropic { deviation: f64 },

    #[error("quadrature grid under-resolved (refinement disagreement {disagreement:.3e})")]
    GridResolution { disagreement: f64 },

    #[error("no threshold segment attains g = {g}; curve is defined for g above ~0.7358")]
    ThresholdUnattainable { g: f64 },
}

/// Whether this error reports a failed numeric assertion rather than a bad
/// input. Used by the CLI to pick the exit code.
impl Error {
    pub fn is_numeric_assertion(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. }
                | Error::Anisotropic { .. }
                | Error::GridResolution { .. }
                | Error::Unnormalized { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
