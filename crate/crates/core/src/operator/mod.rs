//! The bilinear map `Q`, the Leray projector and the heat semigroup.

mod bilinear;
mod coeffs;
mod linear;
mod velocity;

pub use bilinear::{apply_q, QOperator};
pub use coeffs::{flat_index, q_symbol, QCoefficients, N_ALPHA};
pub use linear::{heat_factors, heat_semigroup, leray_project};
pub(crate) use linear::multiply_real;
pub use velocity::{VelocityField, DIVERGENCE_TOL};

use crate::spectral::SpectralError;

#[derive(Debug, thiserror::Error)]
pub enum OperatorError {
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("invalid coefficient tensor: {0}")]
    Coefficients(String),
    #[error("heat semigroup needs t >= 0, got {0}")]
    NegativeTime(f64),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Coefficients of the Navier–Stokes specialization.
pub fn navier_stokes_coeffs() -> QCoefficients {
    QCoefficients::navier_stokes()
}
