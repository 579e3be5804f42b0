//! Both sides of the bilinear Gevrey estimate and of the two time-kernel
//! bounds, evaluated for data that is constant on `[0, T]`. With constant
//! data every Duhamel time integral has a closed form, so the left-hand
//! sides are exact up to rounding.

use serde::{Deserialize, Serialize};

use super::norms::{exp_weighted_norm, working_exponent, working_norm_with, NormParams};
use super::DiagnosticsError;
use crate::operator::{QOperator, VelocityField};

/// Left side and the three right-side terms (without the implied constant).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateSides {
    pub lhs: f64,
    pub rhs_terms: Vec<f64>,
    pub rhs: f64,
}

impl EstimateSides {
    fn new(lhs: f64, rhs_terms: Vec<f64>) -> Self {
        let rhs = rhs_terms.iter().sum();
        Self { lhs, rhs_terms, rhs }
    }

    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }
}

/// `i T / n` for `i = 1..=n`.
pub fn sample_times(t_final: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| t_final * i as f64 / n as f64).collect()
}

/// Copy of `u` with modes outside `keep(|k|)` zeroed and each kept
/// coefficient multiplied by `factor(|k|)`.
fn reweighted<K, F>(u: &VelocityField, keep: K, factor: F) -> VelocityField
where
    K: Fn(f64) -> bool,
    F: Fn(f64) -> f64,
{
    let grid = *u.grid();
    let mut out = u.clone();
    for j in 0..3 {
        let c = out.component_mut(j).coeffs_mut();
        for (idx, z) in c.iter_mut().enumerate() {
            let k = grid.k_abs(idx);
            *z = if keep(k) { *z * factor(k) } else { Default::default() };
        }
    }
    out
}

/// High-frequency part `1_{|k| ≥ 0.01 N₁} u`.
pub fn high_part(u: &VelocityField, params: &NormParams) -> VelocityField {
    let cut = 0.01 * params.n1();
    reweighted(u, |k| k >= cut, |_| 1.0)
}

/// Bilinear estimate for time-independent `f`, `g`:
///
/// LHS `= max_t t^{δ/2} ‖1_{|k|≥0.1N₁} |k|^{δ+½} e^{λt|k|/√T-λ²t/(4T)}
/// ∫₀ᵗ e^{-(t-s)|k|²} Q̂(f,g) ds‖`, where the integral equals
/// `(1-e^{-t|k|²})/|k|² · Q̂(f,g)`. The right side carries the terms
///
/// * `(e^{4η₀λ²}+λ^{-δ}) λ^{-(γ-½+δ)} T^{(γ-½+2δ)/2} (‖f‖‖g_h‖ + ‖f_h‖‖g‖)`,
/// * `λ^{-δ} e^{λ²/4} ‖f‖_X ‖g‖_X`,
/// * `λ^{2-δ} T^{δ/2} (1 + λ^{½+δ+γ} T^{(γ-½-δ)/2} e^{0.01λ²}) (‖g‖‖f‖_X + ‖f‖‖g‖_X)`,
///
/// with `‖·‖` the `H^γ` norm. All suprema in time run over `times`.
pub fn bilinear_estimate(
    op: &QOperator,
    f: &VelocityField,
    g: &VelocityField,
    params: &NormParams,
    times: &[f64],
) -> Result<EstimateSides, DiagnosticsError> {
    params.validate(true)?;
    let (lam, d, gm, tt) = (params.lambda, params.delta, params.gamma, params.t_final);
    let q = op.apply(f, g)?;
    let cut = 0.1 * params.n1();
    let mut lhs: f64 = 0.0;
    for &t in times {
        let dq = reweighted(&q, |k| k >= cut && k > 0.0, |k| {
            -(-t * k * k).exp_m1() / (k * k)
        });
        let v = exp_weighted_norm(&dq, d + 0.5, |k| working_exponent(params, t, k), |_| true);
        lhs = lhs.max(t.powf(0.5 * d) * v);
    }
    let hs = |u: &VelocityField| u.sobolev_norm(gm, false);
    let (nf, ng) = (hs(f)?, hs(g)?);
    let (nfh, ngh) = (hs(&high_part(f, params))?, hs(&high_part(g, params))?);
    let xcut = 0.01 * params.n1();
    let xf = working_norm_with(times, |_| f, params, xcut);
    let xg = working_norm_with(times, |_| g, params, xcut);
    let t1 = ((4.0 * params.eta0 * lam * lam).exp() + lam.powf(-d))
        * lam.powf(-(gm - 0.5 + d))
        * tt.powf(0.5 * (gm - 0.5 + 2.0 * d))
        * (nf * ngh + nfh * ng);
    let t2 = lam.powf(-d) * (0.25 * lam * lam).exp() * xf * xg;
    let t3 = lam.powf(2.0 - d)
        * tt.powf(0.5 * d)
        * (1.0 + lam.powf(0.5 + d + gm) * tt.powf(0.5 * (gm - 0.5 - d)) * (0.01 * lam * lam).exp())
        * (ng * xf + nf * xg);
    Ok(EstimateSides::new(lhs, vec![t1, t2, t3]))
}

/// `(mean_x |F(x)|^p)^{1/p}` with `|·|` the Euclidean norm of the three components.
pub fn lp_norm(u: &VelocityField, p: f64) -> Result<f64, DiagnosticsError> {
    if !(p >= 1.0) {
        return Err(DiagnosticsError::Domain(format!("p must be at least 1, got {p}")));
    }
    let [a, b, c] = u.to_physical()?;
    let n = a.len() as f64;
    let s: f64 = a
        .iter()
        .zip(&b)
        .zip(&c)
        .map(|((x, y), z)| (x * x + y * y + z * z).sqrt().powf(p))
        .sum();
    Ok((s / n).powf(1.0 / p))
}

/// Common right side of the kernel bounds for time-independent `F`:
/// `λ^{-δ} e^{N₀²T} sup_{s≤T} s^δ ‖F‖_{L^{3/(2(1-δ))}} = λ^{-δ} e^{N₀²T} T^δ ‖F‖`.
fn kernel_rhs(force: &VelocityField, params: &NormParams) -> Result<f64, DiagnosticsError> {
    let (lam, d, tt) = (params.lambda, params.delta, params.t_final);
    let n0 = 0.5 * params.n1();
    let p = 3.0 / (2.0 * (1.0 - d));
    Ok(lam.powf(-d) * (n0 * n0 * tt).exp() * tt.powf(d) * lp_norm(force, p)?)
}

/// Low-frequency kernel bound, `N₀ = N₁/2`:
/// LHS `= max_t t^{δ/2} ‖∫_{η₀t}^t 1_{|k|≤2N₀} e^{N₀²s} |k|^{3/2+δ} F̂ ds‖`.
pub fn kernel_low_estimate(
    force: &VelocityField,
    params: &NormParams,
    times: &[f64],
) -> Result<EstimateSides, DiagnosticsError> {
    let d = params.delta;
    let n0 = 0.5 * params.n1();
    let a = n0 * n0;
    let base = reweighted(force, |k| k <= 2.0 * n0, |k| k.powf(1.5 + d)).l2_norm();
    let lhs = times
        .iter()
        .map(|&t| {
            let integral = ((a * t).exp() - (a * params.eta0 * t).exp()) / a;
            t.powf(0.5 * d) * integral * base
        })
        .fold(0.0, f64::max);
    Ok(EstimateSides::new(lhs, vec![kernel_rhs(force, params)?]))
}

/// High-frequency kernel bound:
/// LHS `= max_t t^{δ/2} ‖∫_{η₀t}^t 1_{|k|≥2N₀} e^{N₀²s} |k|^{3/2+δ} e^{-(t-s)|k|²/10} F̂ ds‖`.
pub fn kernel_high_estimate(
    force: &VelocityField,
    params: &NormParams,
    times: &[f64],
) -> Result<EstimateSides, DiagnosticsError> {
    let d = params.delta;
    let n0 = 0.5 * params.n1();
    let e0 = params.eta0;
    let mut lhs: f64 = 0.0;
    for &t in times {
        let w = reweighted(force, |k| k >= 2.0 * n0, |k| {
            let a = n0 * n0 + 0.1 * k * k;
            // e^{-t k²/10} (e^{a t} - e^{a η₀ t}) / a
            let hi = (n0 * n0 * t).exp();
            let lo = (-0.1 * t * k * k + a * e0 * t).exp();
            k.powf(1.5 + d) * (hi - lo) / a
        });
        lhs = lhs.max(t.powf(0.5 * d) * w.l2_norm());
    }
    Ok(EstimateSides::new(lhs, vec![kernel_rhs(force, params)?]))
}
