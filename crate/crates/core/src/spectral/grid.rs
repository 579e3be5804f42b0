use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::SpectralError;

/// Default fraction of the per-axis Nyquist index kept by [`Grid::dealias`](super::SpectralField::dealias).
pub const DEFAULT_DEALIAS_FRACTION: f64 = 2.0 / 3.0;

/// Uniform periodic discretization of the cube `[0, L)^3` with `n` points per axis.
///
/// Storage is row-major over `(i1, i2, i3)` with `i3` fastest. The lattice
/// index `i` maps to the signed integer `ĩ ∈ [-n/2, n/2)` and to the
/// wavenumber `(2π/L)·ĩ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n: usize,
    period: f64,
    dealias_fraction: f64,
}

impl Grid {
    pub fn new(n_per_axis: usize, period: f64) -> Result<Self, SpectralError> {
        if n_per_axis < 4 || n_per_axis % 2 != 0 {
            return Err(SpectralError::InvalidResolution(n_per_axis));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(SpectralError::InvalidPeriod(period));
        }
        Ok(Self {
            n: n_per_axis,
            period,
            dealias_fraction: DEFAULT_DEALIAS_FRACTION,
        })
    }

    pub fn with_dealias_fraction(mut self, fraction: f64) -> Result<Self, SpectralError> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(SpectralError::InvalidDealiasFraction(fraction));
        }
        self.dealias_fraction = fraction;
        Ok(self)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn period(&self) -> f64 {
        self.period
    }

    #[inline]
    pub fn dealias_fraction(&self) -> f64 {
        self.dealias_fraction
    }

    /// Total number of lattice points, `n³`.
    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Lattice spacing in wavenumber space, `2π/L`.
    #[inline]
    pub fn dk(&self) -> f64 {
        2.0 * PI / self.period
    }

    /// Largest per-axis wavenumber magnitude, `(n/2)·2π/L`.
    pub fn k_max_axis(&self) -> f64 {
        self.dk() * (self.n / 2) as f64
    }

    /// Largest `|k|` on the lattice (the corner mode).
    pub fn k_max(&self) -> f64 {
        self.k_max_axis() * 3f64.sqrt()
    }

    /// Largest per-axis integer index kept by dealiasing.
    pub fn dealias_index_limit(&self) -> f64 {
        self.dealias_fraction * (self.n / 2) as f64
    }

    /// Radius of the largest ball contained in the dealiased cube.
    pub fn dealias_radius(&self) -> f64 {
        self.dealias_index_limit().floor() * self.dk()
    }

    /// Signed alias of an axis index.
    #[inline]
    pub fn signed(&self, i: usize) -> i64 {
        let h = self.n / 2;
        if i < h {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Axis index of a signed integer, wrapping modulo `n`.
    #[inline]
    pub fn unsigned(&self, s: i64) -> usize {
        s.rem_euclid(self.n as i64) as usize
    }

    #[inline]
    pub fn index(&self, i1: usize, i2: usize, i3: usize) -> usize {
        (i1 * self.n + i2) * self.n + i3
    }

    #[inline]
    pub fn axes(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        [idx / (n * n), (idx / n) % n, idx % n]
    }

    /// Signed integer mode of a flat index.
    #[inline]
    pub fn mode(&self, idx: usize) -> [i64; 3] {
        let [a, b, c] = self.axes(idx);
        [self.signed(a), self.signed(b), self.signed(c)]
    }

    /// Flat index of a signed integer mode (wrapped into the lattice).
    #[inline]
    pub fn index_of_mode(&self, m: [i64; 3]) -> usize {
        self.index(self.unsigned(m[0]), self.unsigned(m[1]), self.unsigned(m[2]))
    }

    /// Flat index of the mode `-k`.
    #[inline]
    pub fn neg_index(&self, idx: usize) -> usize {
        let n = self.n;
        let [a, b, c] = self.axes(idx);
        self.index((n - a) % n, (n - b) % n, (n - c) % n)
    }

    /// Whether any axis index sits on the unpaired Nyquist value `-n/2`.
    #[inline]
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let h = self.n / 2;
        self.axes(idx).iter().any(|&a| a == h)
    }

    #[inline]
    pub fn wavevector(&self, idx: usize) -> [f64; 3] {
        let dk = self.dk();
        let m = self.mode(idx);
        [dk * m[0] as f64, dk * m[1] as f64, dk * m[2] as f64]
    }

    #[inline]
    pub fn k_squared(&self, idx: usize) -> f64 {
        let k = self.wavevector(idx);
        k[0] * k[0] + k[1] * k[1] + k[2] * k[2]
    }

    #[inline]
    pub fn k_abs(&self, idx: usize) -> f64 {
        self.k_squared(idx).sqrt()
    }

    /// Per-axis wavenumbers in storage order, `dk·ĩ` for `i in 0..n`.
    pub fn axis_wavenumbers(&self) -> Vec<f64> {
        let dk = self.dk();
        (0..self.n).map(|i| dk * self.signed(i) as f64).collect()
    }

    /// `|k|²` for every lattice mode in storage order.
    pub fn k_squared_table(&self) -> Vec<f64> {
        let ax = self.axis_wavenumbers();
        let n = self.n;
        let mut out = vec![0.0; self.len()];
        for (i1, &k1) in ax.iter().enumerate() {
            for (i2, &k2) in ax.iter().enumerate() {
                let base = (i1 * n + i2) * n;
                for (i3, &k3) in ax.iter().enumerate() {
                    out[base + i3] = k1 * k1 + k2 * k2 + k3 * k3;
                }
            }
        }
        out
    }

    /// Physical coordinate of axis index `i`.
    pub fn coordinate(&self, i: usize) -> f64 {
        self.period * i as f64 / self.n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_grid_has_expected_wavenumbers() {
        let g = Grid::new(4, 2.0 * PI).unwrap();
        let ks = g.axis_wavenumbers();
        assert_eq!(ks, vec![0.0, 1.0, -2.0, -1.0]);
    }

    #[test]
    fn k_max_axis_scales_with_resolution() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        assert!((g.k_max_axis() - 16.0).abs() < 1e-14);
    }

    #[test]
    fn doubled_period_halves_spacing() {
        let g = Grid::new(32, 4.0 * PI).unwrap();
        let smallest = (1..g.len())
            .map(|i| g.k_abs(i))
            .fold(f64::INFINITY, f64::min);
        assert!((smallest - 0.5).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(Grid::new(5, 1.0), Err(SpectralError::InvalidResolution(5))));
        assert!(matches!(Grid::new(2, 1.0), Err(SpectralError::InvalidResolution(2))));
        assert!(Grid::new(8, 0.0).is_err());
        assert!(Grid::new(8, -1.0).is_err());
        assert!(Grid::new(8, f64::NAN).is_err());
        assert!(Grid::new(8, 1.0).unwrap().with_dealias_fraction(0.0).is_err());
    }

    #[test]
    fn index_round_trips() {
        let g = Grid::new(6, 1.0).unwrap();
        for idx in 0..g.len() {
            assert_eq!(g.index_of_mode(g.mode(idx)), idx);
            let m = g.mode(idx);
            let neg = g.neg_index(idx);
            if !g.is_nyquist(idx) {
                let mn = g.mode(neg);
                assert_eq!([-m[0], -m[1], -m[2]], mn);
            }
            assert_eq!(g.neg_index(neg), idx);
        }
    }
}
