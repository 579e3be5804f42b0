use num_complex::Complex64;

use super::{OperatorError, VelocityField};
use crate::par;

/// Applies `I - k kᵀ/|k|²` mode by mode; the zero mode is left unchanged.
pub fn leray_project(u: &VelocityField) -> VelocityField {
    let grid = *u.grid();
    let n = grid.n();
    let plane = n * n;
    let ax = grid.axis_wavenumbers();
    let c = u.components();
    // (k·û)/|k|² per mode
    let mut dots = vec![Complex64::default(); grid.len()];
    par::for_each_chunk_mut(&mut dots, plane, |i1, chunk| {
        let k1 = ax[i1];
        for i2 in 0..n {
            for i3 in 0..n {
                let (k2, k3) = (ax[i2], ax[i3]);
                let r2 = k1 * k1 + k2 * k2 + k3 * k3;
                if r2 == 0.0 {
                    continue;
                }
                let idx = (i1 * n + i2) * n + i3;
                chunk[i2 * n + i3] =
                    (c[0].coeffs()[idx] * k1 + c[1].coeffs()[idx] * k2 + c[2].coeffs()[idx] * k3) / r2;
            }
        }
    });
    let mut out = u.clone();
    for j in 0..3 {
        par::for_each_chunk_mut(out.component_mut(j).coeffs_mut(), plane, |i1, chunk| {
            for i2 in 0..n {
                for i3 in 0..n {
                    let kj = match j {
                        0 => ax[i1],
                        1 => ax[i2],
                        _ => ax[i3],
                    };
                    let l = i2 * n + i3;
                    chunk[l] -= dots[i1 * plane + l] * kj;
                }
            }
        });
    }
    out
}

/// Exact heat flow `e^{tΔ}`: each coefficient is multiplied by `e^{-t|k|²}`.
pub fn heat_semigroup(u: &VelocityField, t: f64) -> Result<VelocityField, OperatorError> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(OperatorError::NegativeTime(t));
    }
    let mut out = u.clone();
    if t == 0.0 {
        return Ok(out);
    }
    let factors = heat_factors(u.grid(), t);
    for j in 0..3 {
        multiply_real(out.component_mut(j).coeffs_mut(), &factors);
    }
    Ok(out)
}

/// `e^{-t|k|²}` for every mode in storage order.
pub fn heat_factors(grid: &crate::spectral::Grid, t: f64) -> Vec<f64> {
    let mut k2 = grid.k_squared_table();
    par::for_each_chunk_mut(&mut k2, grid.n() * grid.n(), |_, c| {
        c.iter_mut().for_each(|x| *x = (-t * *x).exp())
    });
    k2
}

pub(crate) fn multiply_real(coeffs: &mut [Complex64], factors: &[f64]) {
    debug_assert_eq!(coeffs.len(), factors.len());
    coeffs.iter_mut().zip(factors).for_each(|(z, f)| *z *= *f);
}
