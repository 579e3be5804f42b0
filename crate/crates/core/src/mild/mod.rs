//! Mild solutions `u = e^{tΔ}u₀ + B(u, u)`: the Duhamel operator, Picard
//! iteration, and an integrating-factor RK4 oracle.

mod checkpoint;
mod config;
mod duhamel;
mod etd;
mod picard;
pub mod quadrature;
mod trajectory;

pub use checkpoint::{
    read_manifest, read_trajectory, write_trajectory, GridInfo, TrajectoryManifest,
    TRAJECTORY_FORMAT,
};
pub use config::{SolverConfig, TimeLattice};
pub use duhamel::{duhamel_b, duhamel_series, DuhamelIntegrator};
pub use etd::{etd_integrate, etd_integrate_guarded, DEFAULT_BLOWUP_GUARD};
pub use picard::{mild_residual, picard_solve, PicardReport};
pub use trajectory::Trajectory;

use crate::operator::OperatorError;
use crate::spectral::SpectralError;

#[derive(Debug, thiserror::Error)]
pub enum MildError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),
    #[error("time {t} outside [0, {horizon}]")]
    TimeOutOfRange { t: f64, horizon: f64 },
    #[error("trajectories differ in grid or time lattice")]
    GridMismatch,
    #[error("Picard iteration did not converge after {} iterates (deltas {:?})", .0.iterates, .0.per_iterate_delta)]
    NonConvergence(Box<PicardReport>),
    #[error("integrator blow-up at t = {t}: norm {norm}")]
    BlowUp { t: f64, norm: f64 },
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
