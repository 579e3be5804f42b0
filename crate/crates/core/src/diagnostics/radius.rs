use serde::{Deserialize, Serialize};

use super::DiagnosticsError;
use crate::operator::VelocityField;
use crate::spectral::{shell_max_by, ShellSpectrum};

/// Relative floor below which a shell maximum is treated as numerically zero.
pub const FLOOR_RELATIVE: f64 = 1e-300;

/// Least-squares model for `ln(shell max)` as a function of `|k|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// `c - r|k|`.
    Exponential,
    /// `c - p ln(1+|k|) - r|k|`: an algebraic prefactor is fitted alongside
    /// the exponential rate so it does not leak into `r`.
    PowerExponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusOptions {
    /// Shell count over `[0, k_max]`; `None` uses shells of width `2π/L`.
    pub n_shells: Option<usize>,
    pub model: FitModel,
    pub min_shells: usize,
    pub min_r2: f64,
}

impl Default for RadiusOptions {
    fn default() -> Self {
        Self {
            n_shells: None,
            model: FitModel::PowerExponential,
            min_shells: 5,
            min_r2: 0.9,
        }
    }
}

impl RadiusOptions {
    pub fn shells_for(&self, grid: &crate::spectral::Grid) -> usize {
        self.n_shells
            .unwrap_or_else(|| (grid.k_max() / grid.dk()).ceil() as usize)
            .max(2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    /// Fitted decay rate, or the resolvability cap when `capped`.
    pub radius: f64,
    pub fit_window: (f64, f64),
    /// Coefficient of determination of the fit (`1` when capped).
    pub r2: f64,
    pub capped: bool,
    /// Slope of the plain `ln v` vs `|k|` regression over the same shells.
    pub log_slope: f64,
    pub shells_used: usize,
}

/// Shell data handed back when a fit cannot be trusted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InconclusiveFit {
    pub reason: String,
    pub fit_window: (f64, f64),
    pub k: Vec<f64>,
    pub values: Vec<f64>,
}

/// Shell maxima of the vector magnitude `|û(k)|`.
pub fn shell_magnitudes(u: &VelocityField, n_shells: usize) -> ShellSpectrum {
    let c = u.components();
    shell_max_by(u.grid(), n_shells, |i| {
        (c[0].coeffs()[i].norm_sqr() + c[1].coeffs()[i].norm_sqr() + c[2].coeffs()[i].norm_sqr()).sqrt()
    })
}

/// Radius estimate with [`RadiusOptions::default`].
pub fn estimate_radius(u: &VelocityField, fit_lo: f64, fit_hi: f64) -> Result<RadiusEstimate, DiagnosticsError> {
    estimate_radius_with(u, fit_lo, fit_hi, &RadiusOptions::default())
}

/// Fits the exponential decay rate of the shell maxima whose maximizing
/// `|k|` lies in `[fit_lo, fit_hi]`.
pub fn estimate_radius_with(
    u: &VelocityField,
    fit_lo: f64,
    fit_hi: f64,
    opts: &RadiusOptions,
) -> Result<RadiusEstimate, DiagnosticsError> {
    let grid = *u.grid();
    if !(fit_lo > 0.0 && fit_lo < fit_hi && fit_hi <= grid.k_max() * (1.0 + 1e-12)) {
        return Err(DiagnosticsError::Domain(format!(
            "fit window [{fit_lo}, {fit_hi}] must satisfy 0 < lo < hi <= k_max = {}",
            grid.k_max()
        )));
    }
    let window = (fit_lo, fit_hi);
    let spec = shell_magnitudes(u, opts.shells_for(&grid));
    let floor = FLOOR_RELATIVE * u.l2_norm();
    let mut ks = Vec::new();
    let mut vs = Vec::new();
    let mut in_window = 0usize;
    for s in 0..spec.len() {
        if spec.empty[s] {
            continue;
        }
        let k = spec.argmax_k[s];
        if k < fit_lo || k > fit_hi {
            continue;
        }
        in_window += 1;
        if spec.values[s] > floor {
            ks.push(k);
            vs.push(spec.values[s]);
        }
    }
    if in_window > 0 && ks.is_empty() {
        return Ok(RadiusEstimate {
            radius: (1.0 / FLOOR_RELATIVE).ln() / fit_lo,
            fit_window: window,
            r2: 1.0,
            capped: true,
            log_slope: f64::NAN,
            shells_used: 0,
        });
    }
    let inconclusive = |reason: String| {
        DiagnosticsError::Inconclusive(Box::new(InconclusiveFit {
            reason,
            fit_window: window,
            k: ks.clone(),
            values: vs.clone(),
        }))
    };
    if ks.len() < opts.min_shells {
        return Err(inconclusive(format!(
            "{} usable shells in window, need {}",
            ks.len(),
            opts.min_shells
        )));
    }
    let y: Vec<f64> = vs.iter().map(|v| v.ln()).collect();
    let (lin, lin_r2) = least_squares(&[&ks], &y);
    let log_slope = lin[1];
    let (rate, r2) = match opts.model {
        FitModel::Exponential => (-lin[1], lin_r2),
        FitModel::PowerExponential => {
            let lk: Vec<f64> = ks.iter().map(|k| (1.0 + k).ln()).collect();
            let (c, r2) = least_squares(&[&lk, &ks], &y);
            (-c[2], r2)
        }
    };
    if !(r2 >= opts.min_r2) {
        return Err(inconclusive(format!("r2 = {r2} below {}", opts.min_r2)));
    }
    Ok(RadiusEstimate {
        radius: rate.max(0.0),
        fit_window: window,
        r2,
        capped: false,
        log_slope,
        shells_used: ks.len(),
    })
}

/// Ordinary least squares `y ≈ c₀ + Σ c_i x_i` via the normal equations
/// (solved with partial pivoting). Returns the coefficients and `r²`.
fn least_squares(xs: &[&Vec<f64>], y: &[f64]) -> (Vec<f64>, f64) {
    let p = xs.len() + 1;
    let m = y.len();
    let row = |i: usize| -> Vec<f64> {
        std::iter::once(1.0).chain(xs.iter().map(|x| x[i])).collect()
    };
    let mut a = vec![vec![0.0; p + 1]; p];
    for i in 0..m {
        let r = row(i);
        for (a_row, &ri) in a.iter_mut().zip(&r) {
            for (c, &rc) in r.iter().enumerate() {
                a_row[c] += ri * rc;
            }
            a_row[p] += ri * y[i];
        }
    }
    for col in 0..p {
        let piv = (col..p)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("nonempty");
        a.swap(col, piv);
        let d = a[col][col];
        if d == 0.0 {
            continue;
        }
        for r in 0..p {
            if r != col {
                let f = a[r][col] / d;
                for c in col..=p {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let coef: Vec<f64> = (0..p)
        .map(|i| if a[i][i] == 0.0 { 0.0 } else { a[i][p] / a[i][i] })
        .collect();
    let mean = y.iter().sum::<f64>() / m as f64;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for i in 0..m {
        let fit: f64 = row(i).iter().zip(&coef).map(|(r, c)| r * c).sum();
        ss_res += (y[i] - fit).powi(2);
        ss_tot += (y[i] - mean).powi(2);
    }
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    (coef, r2)
}
