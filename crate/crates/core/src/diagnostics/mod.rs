//! Functionals of solutions: Sobolev and Gevrey norms, the working norms,
//! high-frequency tails, the radius predictors, a numerical radius estimator
//! and bound reports.

mod bound;
pub mod estimates;
mod formulas;
mod norms;
mod radius;
mod tails;

pub use bound::{bound_report, fmt_num, BoundMode, BoundParameters, BoundReport};
pub use formulas::{beta, k_t, lambda_critical, lambda_subcritical, p_gamma};
pub use norms::{gevrey_norm, sobolev_norm, x_norm, y_norm, NormParams, DEFAULT_ETA0, OVERFLOW_GUARD};
pub use radius::{
    estimate_radius, estimate_radius_with, shell_magnitudes, FitModel, InconclusiveFit,
    RadiusEstimate, RadiusOptions, FLOOR_RELATIVE,
};
pub use tails::{eta_j, tail_norm, zeta_j};

use crate::mild::MildError;
use crate::operator::OperatorError;
use crate::spectral::SpectralError;

#[derive(Debug, thiserror::Error)]
pub enum DiagnosticsError {
    #[error("{0}")]
    Domain(String),
    #[error("inconclusive radius fit: {}", .0.reason)]
    Inconclusive(Box<InconclusiveFit>),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Mild(#[from] MildError),
}
