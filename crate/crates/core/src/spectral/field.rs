use num_complex::Complex64;

use super::fft::{fft3, Direction};
use super::{Grid, SpectralError};
use crate::par;

/// Absolute Hermitian-symmetry tolerance maintained by every operator.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Defect above which a spectral field is treated as corrupted.
pub const CORRUPTION_TOL: f64 = 1e-9;

/// Fourier coefficients of one real scalar field.
///
/// Normalization: a constant physical field `c` has `coeff(0) = c` and all
/// other coefficients zero, so `mean |f|² = Σ |coeff|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::default(); grid.len()],
        }
    }

    pub fn from_coeffs(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self, SpectralError> {
        if coeffs.len() != grid.len() {
            return Err(SpectralError::ShapeMismatch {
                expected: grid.len(),
                found: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient at a signed integer mode.
    pub fn mode(&self, m: [i64; 3]) -> Complex64 {
        self.coeffs[self.grid.index_of_mode(m)]
    }

    pub fn set_mode(&mut self, m: [i64; 3], value: Complex64) {
        let idx = self.grid.index_of_mode(m);
        self.coeffs[idx] = value;
    }

    /// Sets `coeff(m) = value` and `coeff(-m) = conj(value)`.
    pub fn set_mode_pair(&mut self, m: [i64; 3], value: Complex64) {
        let idx = self.grid.index_of_mode(m);
        let neg = self.grid.neg_index(idx);
        self.coeffs[idx] = value;
        self.coeffs[neg] = value.conj();
        if neg == idx {
            self.coeffs[idx] = Complex64::new(value.re, 0.0);
        }
    }

    /// `max_k |coeff(-k) - conj(coeff(k))|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.n();
        let plane = n * n;
        par::max_ordered(n, |i1| {
            let mut worst: f64 = 0.0;
            for idx in i1 * plane..(i1 + 1) * plane {
                let neg = self.grid.neg_index(idx);
                worst = worst.max((self.coeffs[neg] - self.coeffs[idx].conj()).norm());
            }
            worst
        })
    }

    /// Replaces each pair by its Hermitian average.
    pub fn symmetrize(&mut self) {
        for idx in 0..self.coeffs.len() {
            let neg = self.grid.neg_index(idx);
            if neg < idx {
                continue;
            }
            let avg = 0.5 * (self.coeffs[idx] + self.coeffs[neg].conj());
            self.coeffs[idx] = avg;
            self.coeffs[neg] = avg.conj();
        }
    }

    /// Discrete Fourier coefficients of a real array sampled on `grid`.
    pub fn forward_transform(grid: Grid, physical: &[f64]) -> Result<Self, SpectralError> {
        if physical.len() != grid.len() {
            return Err(SpectralError::ShapeMismatch {
                expected: grid.len(),
                found: physical.len(),
            });
        }
        let mut data: Vec<Complex64> = physical.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        fft3(&mut data, grid.n(), Direction::Forward);
        let scale = 1.0 / grid.len() as f64;
        par::for_each_chunk_mut(&mut data, grid.n() * grid.n(), |_, c| {
            c.iter_mut().for_each(|z| *z *= scale)
        });
        Ok(Self { grid, coeffs: data })
    }

    /// Real physical values; rejects fields whose Hermitian defect exceeds
    /// [`CORRUPTION_TOL`].
    pub fn inverse_transform(&self) -> Result<Vec<f64>, SpectralError> {
        let defect = self.hermitian_defect();
        if defect > CORRUPTION_TOL {
            return Err(SpectralError::Corrupted { defect });
        }
        Ok(self.inverse_transform_unchecked())
    }

    pub(crate) fn inverse_transform_unchecked(&self) -> Vec<f64> {
        let mut data = self.coeffs.clone();
        fft3(&mut data, self.grid.n(), Direction::Inverse);
        data.into_iter().map(|z| z.re).collect()
    }

    /// Sharp truncation: zero every mode with some `|ĩ_axis|` above
    /// `dealias_fraction · n/2`.
    pub fn dealias(&self) -> Self {
        let mut out = self.clone();
        out.dealias_in_place();
        out
    }

    pub fn dealias_in_place(&mut self) {
        let grid = self.grid;
        let n = grid.n();
        let limit = grid.dealias_index_limit();
        let keep: Vec<bool> = (0..n).map(|i| (grid.signed(i).abs() as f64) <= limit).collect();
        par::for_each_chunk_mut(&mut self.coeffs, n * n, |i1, chunk| {
            if !keep[i1] {
                chunk.iter_mut().for_each(|z| *z = Complex64::default());
                return;
            }
            for i2 in 0..n {
                for i3 in 0..n {
                    if !(keep[i2] && keep[i3]) {
                        chunk[i2 * n + i3] = Complex64::default();
                    }
                }
            }
        });
    }

    pub fn scale(&mut self, a: f64) {
        self.coeffs.iter_mut().for_each(|z| *z *= a);
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &SpectralField) {
        debug_assert_eq!(self.grid, other.grid);
        self.coeffs
            .iter_mut()
            .zip(&other.coeffs)
            .for_each(|(x, y)| *x += *y * a);
    }

    /// `Σ |coeff|²`.
    pub fn energy(&self) -> f64 {
        let plane = self.grid.n() * self.grid.n();
        par::sum_ordered(self.grid.n(), |i1| {
            self.coeffs[i1 * plane..(i1 + 1) * plane]
                .iter()
                .map(|z| z.norm_sqr())
                .sum()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }
}
