use super::{MildError, Trajectory};
use crate::operator::{heat_factors, multiply_real, QCoefficients, QOperator, VelocityField};

/// Default blow-up guard of [`etd_integrate`]: abort once `‖u‖_{L²}` exceeds
/// this multiple of its initial value.
pub const DEFAULT_BLOWUP_GUARD: f64 = 1e6;

fn apply_factors(u: &VelocityField, f: &[f64]) -> VelocityField {
    let mut out = u.clone();
    for j in 0..3 {
        multiply_real(out.component_mut(j).coeffs_mut(), f);
    }
    out
}

/// Integrating-factor RK4 for `∂_t u = Δu + Q(u, u)`, sampled every step.
///
/// With `v = e^{-tΔ}u` the scheme is classical RK4 on `v' = e^{-tΔ}Q(e^{tΔ}v)`,
/// written back in terms of `u`. The number of steps is `⌈T/dt⌉` and the step
/// is shrunk so that the last sample lands on `T`.
pub fn etd_integrate(
    u0: &VelocityField,
    coeffs: &QCoefficients,
    t_final: f64,
    dt: f64,
) -> Result<Trajectory, MildError> {
    etd_integrate_guarded(u0, coeffs, t_final, dt, DEFAULT_BLOWUP_GUARD)
}

pub fn etd_integrate_guarded(
    u0: &VelocityField,
    coeffs: &QCoefficients,
    t_final: f64,
    dt: f64,
    guard: f64,
) -> Result<Trajectory, MildError> {
    if !(t_final > 0.0 && dt > 0.0 && dt <= t_final) {
        return Err(MildError::InvalidConfig(format!(
            "need 0 < dt <= T, got dt = {dt}, T = {t_final}"
        )));
    }
    let steps = ((t_final / dt) - 1e-9).ceil().max(1.0) as usize;
    let h = t_final / steps as f64;
    let op = QOperator::new(coeffs);
    let grid = *u0.grid();
    let e = heat_factors(&grid, h);
    let e2 = heat_factors(&grid, 0.5 * h);
    let n = |u: &VelocityField| -> Result<VelocityField, MildError> {
        Ok(op.apply_same(u)?.scaled(h))
    };
    let n0 = u0.l2_norm();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(u0.clone());
    let mut u = u0.clone();
    for s in 1..=steps {
        let a = n(&u)?;
        let b = n(&apply_factors(&VelocityField::lin_comb(1.0, &u, 0.5, &a), &e2))?;
        let c = n(&VelocityField::lin_comb(1.0, &apply_factors(&u, &e2), 0.5, &b))?;
        let d = n(&VelocityField::lin_comb(1.0, &apply_factors(&u, &e), 1.0, &apply_factors(&c, &e2)))?;
        let mut next = apply_factors(&u, &e);
        next.axpy(1.0 / 6.0, &apply_factors(&a, &e));
        let mut bc = b;
        bc.axpy(1.0, &c);
        next.axpy(1.0 / 3.0, &apply_factors(&bc, &e2));
        next.axpy(1.0 / 6.0, &d);
        let t = if s == steps { t_final } else { h * s as f64 };
        let norm = next.l2_norm();
        if !norm.is_finite() || norm > guard * n0.max(f64::MIN_POSITIVE) {
            return Err(MildError::BlowUp { t, norm });
        }
        times.push(t);
        states.push(next.clone());
        u = next;
    }
    Trajectory::new(times, states)
}
