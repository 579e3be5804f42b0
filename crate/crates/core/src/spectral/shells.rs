//! Reductions of spectral data over spherical shells and weighted tails.

use serde::{Deserialize, Serialize};

use super::{Grid, SpectralError, SpectralField};
use crate::par;

/// Per-shell reduction of a spectrum over uniform `|k|` shells covering
/// `[0, k_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellSpectrum {
    /// `n_shells + 1` increasing edges; shell `s` is `[edges[s], edges[s+1])`
    /// (the last shell also contains `k_max`).
    pub edges: Vec<f64>,
    pub values: Vec<f64>,
    /// `|k|` of the lattice mode realizing the maximum; `NaN` for empty shells.
    pub argmax_k: Vec<f64>,
    /// `true` when no lattice mode falls in the shell.
    pub empty: Vec<bool>,
}

impl ShellSpectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn width(&self) -> f64 {
        self.edges[1] - self.edges[0]
    }
}

#[inline]
fn shell_of(k: f64, width: f64, n_shells: usize) -> usize {
    ((k / width) as usize).min(n_shells - 1)
}

/// Shell maxima of a nonnegative per-mode magnitude.
pub(crate) fn shell_max_by<F>(grid: &Grid, n_shells: usize, magnitude: F) -> ShellSpectrum
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    assert!(n_shells >= 2, "need at least two shells");
    let k_max = grid.k_max();
    let width = k_max / n_shells as f64;
    let n = grid.n();
    let plane = n * n;
    // (value, |k|, occupied) per shell per plane, merged in plane order.
    let partials = par::map_indexed(n, |i1| {
        let mut best = vec![(0.0f64, f64::NAN, false); n_shells];
        for idx in i1 * plane..(i1 + 1) * plane {
            let k = grid.k_abs(idx);
            let s = shell_of(k, width, n_shells);
            let v = magnitude(idx);
            let b = &mut best[s];
            if !b.2 || v > b.0 || (v == b.0 && k < b.1) {
                *b = (v, k, true);
            }
        }
        best
    });
    let mut values = vec![0.0; n_shells];
    let mut argmax_k = vec![f64::NAN; n_shells];
    let mut occupied = vec![false; n_shells];
    for part in partials {
        for (s, (v, k, occ)) in part.into_iter().enumerate() {
            if !occ {
                continue;
            }
            if !occupied[s] || v > values[s] || (v == values[s] && k < argmax_k[s]) {
                values[s] = v;
                argmax_k[s] = k;
                occupied[s] = true;
            }
        }
    }
    let edges = (0..=n_shells).map(|s| width * s as f64).collect();
    ShellSpectrum {
        edges,
        values,
        argmax_k,
        empty: occupied.iter().map(|o| !o).collect(),
    }
}

/// Shell maxima of `|coeff(k)|`.
pub fn shell_reduce_max(field: &SpectralField, n_shells: usize) -> ShellSpectrum {
    let c = field.coeffs();
    shell_max_by(field.grid(), n_shells, |i| c[i].norm())
}

/// Sum over modes with `|k| >= cutoff` of `w(k)^{2s} · e(k)`, where `e(k)` is
/// a per-mode squared magnitude. Returns the square *of* the weighted norm.
pub(crate) fn weighted_sum_sq<F>(
    grid: &Grid,
    s: f64,
    homogeneous: bool,
    cutoff: f64,
    energy: F,
) -> Result<f64, SpectralError>
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    if homogeneous && s < 0.0 && energy(0) > 0.0 {
        return Err(SpectralError::Domain(format!(
            "homogeneous norm of order {s} requires a vanishing zero mode"
        )));
    }
    let n = grid.n();
    let ax = grid.axis_wavenumbers();
    let cutoff_sq = cutoff * cutoff;
    let sum = par::sum_ordered(n, |i1| {
        let mut acc = 0.0;
        for i2 in 0..n {
            let base = (i1 * n + i2) * n;
            let k12 = ax[i1] * ax[i1] + ax[i2] * ax[i2];
            for (i3, &k3) in ax.iter().enumerate() {
                let k2 = k12 + k3 * k3;
                if cutoff > 0.0 && k2 < cutoff_sq {
                    continue;
                }
                let e = energy(base + i3);
                if e == 0.0 {
                    continue;
                }
                let w = if homogeneous { k2 } else { 1.0 + k2 };
                acc += if s == 0.0 { e } else { w.powf(s) * e };
            }
        }
        acc
    });
    Ok(sum)
}

/// `( Σ_{|k| ≥ cutoff} w(k)^{2s} |coeff(k)|² )^{1/2}` with `w = |k|`
/// (homogeneous) or `w = ⟨k⟩`.
pub fn shell_reduce_weighted_l2(
    field: &SpectralField,
    s: f64,
    homogeneous: bool,
    cutoff: Option<f64>,
) -> Result<f64, SpectralError> {
    let c = field.coeffs();
    weighted_sum_sq(field.grid(), s, homogeneous, cutoff.unwrap_or(0.0), |i| {
        c[i].norm_sqr()
    })
    .map(f64::sqrt)
}
