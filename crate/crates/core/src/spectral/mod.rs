//! Periodic grid, discrete Fourier transforms, dealiasing and shell reductions.

mod fft;
mod field;
mod grid;
pub mod io;
mod shells;

pub use field::{SpectralField, CORRUPTION_TOL, HERMITIAN_TOL};
pub use grid::{Grid, DEFAULT_DEALIAS_FRACTION};
pub use shells::{shell_reduce_max, shell_reduce_weighted_l2, ShellSpectrum};
pub(crate) use shells::{shell_max_by, weighted_sum_sq};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("resolution must be even and at least 4, got {0}")]
    InvalidResolution(usize),
    #[error("period must be positive and finite, got {0}")]
    InvalidPeriod(f64),
    #[error("dealias fraction must lie in (0, 1], got {0}")]
    InvalidDealiasFraction(f64),
    #[error("array has {found} entries, grid expects {expected}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("Hermitian symmetry violated by {defect:e}; field is corrupted")]
    Corrupted { defect: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("malformed field record: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Convenience: `forward_transform` as a free function.
pub fn forward_transform(grid: Grid, physical: &[f64]) -> Result<SpectralField, SpectralError> {
    SpectralField::forward_transform(grid, physical)
}

pub fn inverse_transform(field: &SpectralField) -> Result<Vec<f64>, SpectralError> {
    field.inverse_transform()
}

pub fn dealias(field: &SpectralField) -> SpectralField {
    field.dealias()
}

pub fn build_grid(n_per_axis: usize, period: f64) -> Result<Grid, SpectralError> {
    Grid::new(n_per_axis, period)
}
