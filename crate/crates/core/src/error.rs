use thiserror::Error;

/// Errors raised by the analytic solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum IsbError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("minimization did not converge after {iterations} iterations (best energy {best_energy:.12e} at f={f:.6e}, alpha={alpha:.6e})")]
    NotConverged {
        iterations: usize,
        best_energy: f64,
        f: f64,
        alpha: f64,
    },

    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
}

pub type Result<T> = std::result::Result<T, IsbError>;

pub(crate) fn ensure_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(IsbError::InvalidParams(format!("{name} must be finite, got {x}")))
    }
}
