use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("spectrum not strictly descending at index {index} (gap {gap:e})")]
    NotOrdered { index: usize, gap: f64 },

    #[error("zero gap between adjacent eigenvalues at index {0}")]
    ZeroGap(usize),

    #[error("eigendecomposition did not converge: off-diagonal residual {residual:e} after {sweeps} sweeps")]
    NoConvergence { residual: f64, sweeps: usize },

    #[error("degenerate eigenvalue range: dataset spans a single value")]
    DegenerateRange,

    #[error("path stuck at t={t}: {skips} consecutive sub-minimum controller steps")]
    StuckPath {
        t: f64,
        skips: usize,
        /// Partial path up to the last recorded grid point, for diagnostics.
        partial: Box<crate::sde::SpectralPath>,
    },

    #[error("path time {t} is not on the schedule grid")]
    OffGrid { t: f64 },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("dataset shortfall: requested {requested}, achieved {achieved}")]
    Shortfall { requested: usize, achieved: usize },

    #[error("reference spectra {i} and {j} are {distance} apart, closer than 2*epsilon")]
    OverlappingReferences { i: usize, j: usize, distance: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
