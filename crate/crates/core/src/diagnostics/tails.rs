use super::DiagnosticsError;
use crate::mild::Trajectory;

/// `max_{τ ≤ t} ‖ 1_{|k| ≥ cutoff} |k|^γ û(τ) ‖` over lattice times.
pub fn tail_norm(traj: &Trajectory, cutoff: f64, gamma: f64, t: f64) -> Result<f64, DiagnosticsError> {
    if !(t >= 0.0) || t > traj.horizon() * (1.0 + 1e-12) {
        return Err(DiagnosticsError::Domain(format!(
            "t = {t} outside the trajectory horizon {}",
            traj.horizon()
        )));
    }
    let limit = t + 1e-9 * traj.horizon();
    let mut best: f64 = 0.0;
    for (i, &tau) in traj.times().iter().enumerate() {
        if tau > limit {
            break;
        }
        let v = traj.state(i).sobolev_norm_above(gamma, true, cutoff.max(0.0))?;
        best = best.max(v);
    }
    Ok(best)
}

/// `η_J^γ(t)`: tail above `0.01·J`.
pub fn eta_j(traj: &Trajectory, j: f64, gamma: f64, t: f64) -> Result<f64, DiagnosticsError> {
    if !(j > 0.0) {
        return Err(DiagnosticsError::Domain(format!("J must be positive, got {j}")));
    }
    tail_norm(traj, 0.01 * j, gamma, t)
}

/// `ζ_J^γ(t)`: tail above `J`.
pub fn zeta_j(traj: &Trajectory, j: f64, gamma: f64, t: f64) -> Result<f64, DiagnosticsError> {
    if !(j > 0.0) {
        return Err(DiagnosticsError::Domain(format!("J must be positive, got {j}")));
    }
    tail_norm(traj, j, gamma, t)
}
