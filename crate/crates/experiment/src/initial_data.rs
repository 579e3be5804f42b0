//! Initial-data factories. Every field is divergence-free, Hermitian and a
//! pure function of its parameters and seed.

use std::f64::consts::PI;

use gns_core::operator::{leray_project, VelocityField};
use gns_core::par;
use gns_core::spectral::Grid;
use gns_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataKind {
    TaylorGreen,
    SingleMode,
    RandomSobolevTail,
    CompactSpectrum,
}

impl DataKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DataKind::TaylorGreen => "taylor_green",
            DataKind::SingleMode => "single_mode",
            DataKind::RandomSobolevTail => "random_sobolev_tail",
            DataKind::CompactSpectrum => "compact_spectrum",
        }
    }
}

impl std::str::FromStr for DataKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "taylor_green" => Ok(DataKind::TaylorGreen),
            "single_mode" => Ok(DataKind::SingleMode),
            "random_sobolev_tail" => Ok(DataKind::RandomSobolevTail),
            "compact_spectrum" => Ok(DataKind::CompactSpectrum),
            other => Err(format!(
                "unknown data kind {other:?} (taylor_green|single_mode|random_sobolev_tail|compact_spectrum)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataParams {
    pub amplitude: f64,
    /// `s` in `|k|^{-s}` for the random kinds.
    pub exponent: f64,
    pub band_lo: f64,
    /// Upper band edge for `random_sobolev_tail`; `None` is the axis `k_max`.
    pub band_hi: Option<f64>,
    /// Integer mode for `single_mode`.
    pub mode: [i64; 3],
    /// Support radius for `compact_spectrum`.
    pub k_cut: f64,
}

impl Default for DataParams {
    fn default() -> Self {
        Self {
            amplitude: 1.0,
            exponent: 2.5,
            band_lo: 1.0,
            band_hi: None,
            mode: [1, 0, 0],
            k_cut: 2.0,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("band [{lo}, {hi}] is empty or exceeds the grid's axis k_max {k_max}")]
    Band { lo: f64, hi: f64, k_max: f64 },
    #[error("mode {0:?} is zero or not representable on the grid")]
    Mode([i64; 3]),
}

pub fn make_initial_data(
    kind: DataKind,
    grid: Grid,
    params: &DataParams,
    seed: u64,
) -> Result<VelocityField, DataError> {
    match kind {
        DataKind::TaylorGreen => Ok(taylor_green(grid, params.amplitude)),
        DataKind::SingleMode => single_mode(grid, params.mode, params.amplitude),
        DataKind::RandomSobolevTail => {
            let hi = params.band_hi.unwrap_or(grid.k_max_axis());
            random_band(grid, params.amplitude, params.exponent, params.band_lo, hi, seed)
        }
        DataKind::CompactSpectrum => random_band(
            grid,
            params.amplitude,
            params.exponent,
            params.band_lo,
            params.k_cut,
            seed,
        ),
    }
}

/// `A (sin x cos y cos z, -cos x sin y cos z, 0)` in box-scaled coordinates,
/// set directly on its eight modes `(±1, ±1, ±1)`, so `k·û = 0` holds exactly.
pub fn taylor_green(grid: Grid, amplitude: f64) -> VelocityField {
    let mut u = VelocityField::zeros(grid);
    for sx in [-1i64, 1] {
        for sy in [-1i64, 1] {
            for sz in [-1i64, 1] {
                let m = [sx, sy, sz];
                let c = amplitude / 8.0;
                u.component_mut(0).set_mode(m, Complex64::new(0.0, -c * sx as f64));
                u.component_mut(1).set_mode(m, Complex64::new(0.0, c * sy as f64));
            }
        }
    }
    u
}

/// `A e cos(k·x)·2` with `e ⊥ k` a unit vector: the pair `û(±m) = A e`.
pub fn single_mode(grid: Grid, m: [i64; 3], amplitude: f64) -> Result<VelocityField, DataError> {
    let lim = (grid.n() / 2) as i64;
    if m == [0, 0, 0] || m.iter().any(|x| x.abs() >= lim) {
        return Err(DataError::Mode(m));
    }
    let k = m.map(|x| x as f64);
    // cross with the axis least aligned with k
    let a = (0..3)
        .min_by(|&i, &j| k[i].abs().total_cmp(&k[j].abs()))
        .unwrap_or(0);
    let mut axis = [0.0; 3];
    axis[a] = 1.0;
    let e = [
        k[1] * axis[2] - k[2] * axis[1],
        k[2] * axis[0] - k[0] * axis[2],
        k[0] * axis[1] - k[1] * axis[0],
    ];
    let norm = (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt();
    let mut u = VelocityField::zeros(grid);
    for (j, ej) in e.iter().enumerate() {
        u.component_mut(j)
            .set_mode_pair(m, Complex64::new(amplitude * ej / norm, 0.0));
    }
    Ok(u)
}

/// Stream index for a signed mode; distinct for every mode with entries in
/// `(-2^20, 2^20)`.
fn mode_stream(m: [i64; 3]) -> u64 {
    let off = |x: i64| ((x + (1 << 20)) as u64) & ((1 << 21) - 1);
    (off(m[0]) << 42) | (off(m[1]) << 21) | off(m[2])
}

/// `m` is the representative of the pair `{m, -m}` (first nonzero entry positive).
fn is_representative(m: [i64; 3]) -> bool {
    m.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// `û(k) = A |k|^{-s} (e^{iθ₁}, e^{iθ₂}, e^{iθ₃})` for `lo ≤ |k| ≤ hi`,
/// Hermitian-completed and Leray-projected. The phases of each mode come from
/// their own generator stream, so the result does not depend on traversal order.
pub fn random_band(
    grid: Grid,
    amplitude: f64,
    exponent: f64,
    lo: f64,
    hi: f64,
    seed: u64,
) -> Result<VelocityField, DataError> {
    let k_max = grid.k_max_axis();
    if !(lo >= 0.0 && hi > lo && hi <= k_max + 1e-12) {
        return Err(DataError::Band { lo, hi, k_max });
    }
    let n = grid.n();
    let plane = n * n;
    let per_plane = par::map_indexed(n, |i1| {
        let mut out = Vec::new();
        for rest in 0..plane {
            let idx = i1 * plane + rest;
            let m = grid.mode(idx);
            let k = grid.k_abs(idx);
            if grid.is_nyquist(idx) || !is_representative(m) || k < lo || k > hi || k == 0.0 {
                continue;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(mode_stream(m));
            let a = amplitude * k.powf(-exponent);
            let vals: [Complex64; 3] =
                std::array::from_fn(|_| Complex64::from_polar(a, rng.gen_range(0.0..2.0 * PI)));
            out.push((m, vals));
        }
        out
    });
    let mut u = VelocityField::zeros(grid);
    for (m, vals) in per_plane.into_iter().flatten() {
        for (j, v) in vals.into_iter().enumerate() {
            u.component_mut(j).set_mode_pair(m, v);
        }
    }
    Ok(leray_project(&u))
}
