use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid size {0}: need a power of two >= 8")]
    InvalidGrid(usize),
    #[error("non-finite sample at node {0}")]
    NonFinite(usize),
    #[error("grid mismatch: {0} vs {1} nodes")]
    GridMismatch(usize, usize),
    #[error("{0}")]
    Domain(String),
    #[error("quadrature did not converge: {0}")]
    NonConvergent(String),
    #[error(
        "Bishop iteration did not converge after {iterations} steps (last increment {residual:e})"
    )]
    NotConverged { iterations: usize, residual: f64 },
    #[error("grid too coarse for the bump window: n = {n}, need n >= {required}")]
    Unresolved { n: usize, required: usize },
    #[error("no alpha in the grid makes the disc point down")]
    NoAdmissibleAlpha,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergent(_) | Error::NotConverged { .. } | Error::NoAdmissibleAlpha
        )
    }
}
