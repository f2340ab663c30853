use thiserror::Error;

#[derive(Debug, Error)]
pub enum EdError {
    #[error("invalid truncation: {0}")]
    InvalidTruncation(String),

    #[error("Hilbert dimension {dim} exceeds the cap of {cap} amplitudes")]
    DimensionCap { dim: u64, cap: u64 },

    #[error("Lanczos did not converge: eigenpair {index} has residual {residual:.3e} after {iterations} iterations")]
    NotConverged {
        index: usize,
        residual: f64,
        iterations: usize,
    },

    #[error("time step rejected: error estimate {estimate:.3e} at substep {substep:.3e}")]
    StepRejected { estimate: f64, substep: f64 },

    #[error("eigen index {index} out of range ({available} computed)")]
    IndexOutOfRange { index: usize, available: usize },

    #[error(transparent)]
    Params(#[from] isb_core::IsbError),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, EdError>;
