use serde::{Deserialize, Serialize};

use super::{DuhamelIntegrator, MildError, SolverConfig, Trajectory};
use crate::operator::{heat_semigroup, QCoefficients, VelocityField};

/// Outcome of a Picard run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicardReport {
    /// Number of iterates formed, counting `u₁ = e^{tΔ}u₀`.
    pub iterates: usize,
    /// `sup_t ‖u_{n+1}(t) - u_n(t)‖_{H^γ}` for each completed step.
    pub per_iterate_delta: Vec<f64>,
    pub converged: bool,
    /// `max_t` of the mild residual of the returned trajectory.
    pub residual: f64,
    /// Mild residual at every lattice time.
    pub residuals: Vec<f64>,
}

/// Iterates `u_{n+1} = e^{tΔ}u₀ + B(u_n, u_n)` from `u₁ = e^{tΔ}u₀` on the
/// lattice of `cfg` until the sup-in-time `H^γ` step falls below `cfg.tol`.
///
/// Non-convergence (iteration cap or runaway deltas) is returned as
/// [`MildError::NonConvergence`] carrying the delta history.
pub fn picard_solve(
    u0: &VelocityField,
    coeffs: &QCoefficients,
    cfg: &SolverConfig,
) -> Result<(Trajectory, PicardReport), MildError> {
    cfg.validate()?;
    let times = cfg.times();
    let heat = |t: f64| heat_semigroup(u0, t);
    let mut states = times.iter().map(|&t| heat(t)).collect::<Result<Vec<_>, _>>()?;
    let mut report = PicardReport {
        iterates: 1,
        per_iterate_delta: Vec::new(),
        converged: false,
        residual: 0.0,
        residuals: vec![0.0; times.len()],
    };
    if u0.is_zero() {
        report.converged = true;
        return Ok((Trajectory::new(times, states)?, report));
    }
    let integ = DuhamelIntegrator::new(coeffs, cfg.quad_order);
    let grid = *u0.grid();
    let limit = cfg.blowup_guard * (1.0 + u0.sobolev_norm(cfg.gamma, false)?);
    loop {
        if report.iterates >= cfg.max_iter {
            return Err(MildError::NonConvergence(Box::new(report)));
        }
        // The old state i+1 is only needed through its physical values once
        // interval i has been integrated, so states are replaced in place.
        let mut b = VelocityField::zeros(grid);
        let mut delta: f64 = 0.0;
        let mut prev = states[0].to_physical()?;
        for i in 0..times.len() - 1 {
            let h = times[i + 1] - times[i];
            let next = states[i + 1].to_physical()?;
            let inc = integ.interval(grid, h, (&prev, &next), None);
            b = heat_semigroup(&b, h)?;
            b.axpy(1.0, &inc);
            let mut new = heat(times[i + 1])?;
            new.axpy(1.0, &b);
            let d = new.sub(&states[i + 1]).sobolev_norm(cfg.gamma, false)?;
            delta = if d.is_nan() { f64::NAN } else { delta.max(d) };
            states[i + 1] = new;
            prev = next;
        }
        report.iterates += 1;
        report.per_iterate_delta.push(delta);
        if !delta.is_finite() || delta > limit {
            return Err(MildError::NonConvergence(Box::new(report)));
        }
        if delta <= cfg.tol {
            report.converged = true;
            break;
        }
    }
    let traj = Trajectory::new(times, states)?;
    report.residuals = residual_with(&integ, &traj, u0, cfg.gamma)?;
    report.residual = report.residuals.iter().copied().fold(0.0, f64::max);
    Ok((traj, report))
}

fn residual_with(
    integ: &DuhamelIntegrator,
    traj: &Trajectory,
    u0: &VelocityField,
    gamma: f64,
) -> Result<Vec<f64>, MildError> {
    let mut out = Vec::with_capacity(traj.len());
    let times = traj.times();
    integ.sweep(traj, None, |i, b| {
        let mut r = traj.state(i).sub(&heat_semigroup(u0, times[i])?);
        r.axpy(-1.0, b);
        out.push(r.sobolev_norm(gamma, false)?);
        Ok(())
    })?;
    Ok(out)
}

/// `‖u(t) - e^{tΔ}u₀ - B(u, u)(t)‖_{H^γ}` at every lattice time.
pub fn mild_residual(
    traj: &Trajectory,
    u0: &VelocityField,
    coeffs: &QCoefficients,
    gamma: f64,
    quad_order: usize,
) -> Result<Vec<f64>, MildError> {
    residual_with(&DuhamelIntegrator::new(coeffs, quad_order), traj, u0, gamma)
}
