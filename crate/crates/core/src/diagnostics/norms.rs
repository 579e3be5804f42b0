use serde::{Deserialize, Serialize};

use super::DiagnosticsError;
use crate::mild::Trajectory;
use crate::operator::VelocityField;
use crate::par;

/// Exponents above this (natural-log units) are reported as overflow.
pub const OVERFLOW_GUARD: f64 = 700.0;

/// Default `η₀`.
pub const DEFAULT_ETA0: f64 = 1e-5;

/// Parameters of the working norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormParams {
    pub gamma: f64,
    pub delta: f64,
    /// Horizon `T`.
    pub t_final: f64,
    pub lambda: f64,
    pub eta0: f64,
}

impl NormParams {
    pub fn new(gamma: f64, delta: f64, t_final: f64, lambda: f64) -> Self {
        Self {
            gamma,
            delta,
            t_final,
            lambda,
            eta0: DEFAULT_ETA0,
        }
    }

    /// Violations of the parameter invariants; `subcritical` adds the
    /// requirement `γ > ½ + 2δ`.
    pub fn violations(&self, subcritical: bool) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.delta > 0.0) {
            v.push(format!("delta must be positive, got {}", self.delta));
        }
        if subcritical && !(self.gamma > 0.5 + 2.0 * self.delta) {
            v.push(format!(
                "gamma must exceed 1/2 + 2 delta = {}, got {}",
                0.5 + 2.0 * self.delta,
                self.gamma
            ));
        }
        if !(self.t_final > 0.0) {
            v.push(format!("T must be positive, got {}", self.t_final));
        }
        if !(self.lambda >= 0.0) {
            v.push(format!("lambda must be nonnegative, got {}", self.lambda));
        }
        if !(self.eta0 > 0.0 && self.eta0 < 1.0) {
            v.push(format!("eta0 must lie in (0, 1), got {}", self.eta0));
        }
        v
    }

    pub fn validate(&self, subcritical: bool) -> Result<(), DiagnosticsError> {
        let v = self.violations(subcritical);
        if v.is_empty() {
            Ok(())
        } else {
            Err(DiagnosticsError::Domain(v.join("; ")))
        }
    }

    /// `N₁ = λ T^{-1/2}`.
    pub fn n1(&self) -> f64 {
        self.lambda / self.t_final.sqrt()
    }
}

/// `‖u‖_{H^s}` (`⟨k⟩` weight) or `‖u‖_{Ḣ^s}` (`|k|` weight), components in quadrature.
pub fn sobolev_norm(u: &VelocityField, s: f64, homogeneous: bool) -> Result<f64, DiagnosticsError> {
    Ok(u.sobolev_norm(s, homogeneous)?)
}

/// `(Σ_j Σ_k w(k)² |û_j(k)|²)^{1/2}` with `w(k) = |k|^s e^{E(k)}`; `+∞` as
/// soon as `E(k) > OVERFLOW_GUARD` on a nonzero coefficient. `keep` masks modes.
pub(crate) fn exp_weighted_norm<E, K>(u: &VelocityField, s: f64, exponent: E, keep: K) -> f64
where
    E: Fn(f64) -> f64 + Sync + Send,
    K: Fn(f64) -> bool + Sync + Send,
{
    let grid = *u.grid();
    let n = grid.n();
    let ax = grid.axis_wavenumbers();
    let c = u.components();
    let partial = par::map_indexed(n, |i1| {
        let mut acc = 0.0;
        for i2 in 0..n {
            for i3 in 0..n {
                let idx = (i1 * n + i2) * n + i3;
                let e = c[0].coeffs()[idx].norm_sqr()
                    + c[1].coeffs()[idx].norm_sqr()
                    + c[2].coeffs()[idx].norm_sqr();
                if e == 0.0 {
                    continue;
                }
                let k = (ax[i1] * ax[i1] + ax[i2] * ax[i2] + ax[i3] * ax[i3]).sqrt();
                if !keep(k) {
                    continue;
                }
                let x = exponent(k);
                if x > OVERFLOW_GUARD {
                    return f64::INFINITY;
                }
                let p = if s == 0.0 { 1.0 } else { k.powf(2.0 * s) };
                acc += p * (2.0 * x).exp() * e;
            }
        }
        acc
    });
    partial.into_iter().sum::<f64>().sqrt()
}

/// `‖ |k|^s e^{r|k|} û ‖`; `+∞` (overflow flag) when `r|k|` exceeds
/// [`OVERFLOW_GUARD`] on a nonzero coefficient.
pub fn gevrey_norm(u: &VelocityField, r: f64, s: f64) -> Result<f64, DiagnosticsError> {
    if !(r >= 0.0) {
        return Err(DiagnosticsError::Domain(format!("r must be nonnegative, got {r}")));
    }
    if s < 0.0 && u.components().iter().any(|c| c.coeffs()[0].norm() > 0.0) {
        return Err(DiagnosticsError::Domain(format!(
            "order {s} requires a vanishing zero mode"
        )));
    }
    if r == 0.0 {
        return sobolev_norm(u, s, true);
    }
    Ok(exp_weighted_norm(u, s, |k| r * k, |k| k > 0.0 || s == 0.0))
}

/// Weight exponent of the working norms at time `t`:
/// `-λ²t/(4T) + λt|k|/√T`.
pub(crate) fn working_exponent(p: &NormParams, t: f64, k: f64) -> f64 {
    -p.lambda * p.lambda * t / (4.0 * p.t_final) + p.lambda * t * k / p.t_final.sqrt()
}

fn working_norm(traj: &Trajectory, p: &NormParams, cutoff: f64) -> Result<f64, DiagnosticsError> {
    if traj.horizon() < p.t_final * (1.0 - 1e-12) {
        return Err(DiagnosticsError::Domain(format!(
            "trajectory horizon {} is shorter than T = {}",
            traj.horizon(),
            p.t_final
        )));
    }
    Ok(working_norm_with(traj.times(), |i| traj.state(i), p, cutoff))
}

/// Maximum over `times ≤ T` of the working-norm weight applied to `state(i)`.
pub(crate) fn working_norm_with<'a, S>(times: &[f64], state: S, p: &NormParams, cutoff: f64) -> f64
where
    S: Fn(usize) -> &'a VelocityField,
{
    let s = p.delta + 0.5;
    let mut best: f64 = 0.0;
    for (i, &t) in times.iter().enumerate() {
        if t > p.t_final * (1.0 + 1e-12) {
            break;
        }
        if t == 0.0 {
            continue;
        }
        let v = exp_weighted_norm(state(i), s, |k| working_exponent(p, t, k), |k| {
            k > 0.0 && k >= cutoff
        });
        best = best.max(t.powf(0.5 * p.delta) * v);
    }
    best
}

/// `‖u‖_{X_T} = max_t t^{δ/2} ‖ |k|^{δ+½} 1_{|k| ≥ 0.01N₁} e^{-λ²t/(4T)+λt|k|/√T} û(t) ‖`
/// over lattice times `t ≤ T`.
pub fn x_norm(traj: &Trajectory, params: &NormParams) -> Result<f64, DiagnosticsError> {
    working_norm(traj, params, 0.01 * params.n1())
}

/// As [`x_norm`] with the cutoff `|k| ≥ T^{-1/4}`.
pub fn y_norm(traj: &Trajectory, params: &NormParams) -> Result<f64, DiagnosticsError> {
    working_norm(traj, params, params.t_final.powf(-0.25))
}
