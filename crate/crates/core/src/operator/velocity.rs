use num_complex::Complex64;

use super::OperatorError;
use crate::par;
use crate::spectral::{weighted_sum_sq, Grid, SpectralError, SpectralField};

/// Tolerance of the divergence-free invariant, relative to the L² norm.
pub const DIVERGENCE_TOL: f64 = 1e-10;

/// Three spectral components on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityField {
    comps: [SpectralField; 3],
}

impl VelocityField {
    pub fn new(comps: [SpectralField; 3]) -> Result<Self, OperatorError> {
        let g = *comps[0].grid();
        if comps.iter().any(|c| *c.grid() != g) {
            return Err(OperatorError::GridMismatch);
        }
        Ok(Self { comps })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            comps: [
                SpectralField::zeros(grid),
                SpectralField::zeros(grid),
                SpectralField::zeros(grid),
            ],
        }
    }

    /// Transforms three real arrays sampled on `grid`.
    pub fn from_physical(grid: Grid, physical: &[Vec<f64>; 3]) -> Result<Self, OperatorError> {
        let c: Vec<SpectralField> = physical
            .iter()
            .map(|p| SpectralField::forward_transform(grid, p))
            .collect::<Result<_, _>>()?;
        let [a, b, d]: [SpectralField; 3] = c.try_into().expect("three components");
        Ok(Self { comps: [a, b, d] })
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        self.comps[0].grid()
    }

    #[inline]
    pub fn component(&self, j: usize) -> &SpectralField {
        &self.comps[j]
    }

    #[inline]
    pub fn component_mut(&mut self, j: usize) -> &mut SpectralField {
        &mut self.comps[j]
    }

    pub fn components(&self) -> &[SpectralField; 3] {
        &self.comps
    }

    pub fn into_components(self) -> [SpectralField; 3] {
        self.comps
    }

    pub fn to_physical(&self) -> Result<[Vec<f64>; 3], SpectralError> {
        Ok([
            self.comps[0].inverse_transform()?,
            self.comps[1].inverse_transform()?,
            self.comps[2].inverse_transform()?,
        ])
    }

    pub fn check_grid(&self, other: &VelocityField) -> Result<(), OperatorError> {
        if self.grid() != other.grid() {
            return Err(OperatorError::GridMismatch);
        }
        Ok(())
    }

    pub fn scale(&mut self, a: f64) {
        self.comps.iter_mut().for_each(|c| c.scale(a));
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.scale(a);
        out
    }

    /// `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &VelocityField) {
        for (x, y) in self.comps.iter_mut().zip(&other.comps) {
            x.axpy(a, y);
        }
    }

    pub fn add(&self, other: &VelocityField) -> Self {
        let mut out = self.clone();
        out.axpy(1.0, other);
        out
    }

    pub fn sub(&self, other: &VelocityField) -> Self {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }

    /// `a·x + b·y`.
    pub fn lin_comb(a: f64, x: &VelocityField, b: f64, y: &VelocityField) -> Self {
        let mut out = x.scaled(a);
        out.axpy(b, y);
        out
    }

    /// `Σ_j Σ_k |coeff_j(k)|²`, the squared L² norm (mean-square normalization).
    pub fn energy(&self) -> f64 {
        self.comps.iter().map(|c| c.energy()).sum()
    }

    /// `(Σ_j Σ_k w(k)^{2s} |coeff_j(k)|²)^{1/2}` with `w = |k|` (homogeneous)
    /// or `w = ⟨k⟩`, restricted to `|k| ≥ cutoff`.
    pub fn sobolev_norm_above(&self, s: f64, homogeneous: bool, cutoff: f64) -> Result<f64, SpectralError> {
        let grid = *self.grid();
        let c = &self.comps;
        let sum = weighted_sum_sq(&grid, s, homogeneous, cutoff, |i| {
            c[0].coeffs()[i].norm_sqr() + c[1].coeffs()[i].norm_sqr() + c[2].coeffs()[i].norm_sqr()
        })?;
        Ok(sum.sqrt())
    }

    pub fn sobolev_norm(&self, s: f64, homogeneous: bool) -> Result<f64, SpectralError> {
        self.sobolev_norm_above(s, homogeneous, 0.0)
    }

    pub fn l2_norm(&self) -> f64 {
        self.energy().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        self.comps
            .iter()
            .all(|c| c.coeffs().iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.comps
            .iter()
            .map(|c| c.hermitian_defect())
            .fold(0.0, f64::max)
    }

    pub fn dealias_in_place(&mut self) {
        self.comps.iter_mut().for_each(|c| c.dealias_in_place());
    }

    /// Spectral divergence `i Σ_j k_j coeff_j(k)`.
    pub fn divergence(&self) -> SpectralField {
        let grid = *self.grid();
        let mut out = SpectralField::zeros(grid);
        let n = grid.n();
        let ax = grid.axis_wavenumbers();
        let plane = n * n;
        par::for_each_chunk_mut(out.coeffs_mut(), plane, |i1, chunk| {
            for i2 in 0..n {
                for i3 in 0..n {
                    let idx = grid.index(i1, i2, i3);
                    let s = self.comps[0].coeffs()[idx] * ax[i1]
                        + self.comps[1].coeffs()[idx] * ax[i2]
                        + self.comps[2].coeffs()[idx] * ax[i3];
                    chunk[i2 * n + i3] = Complex64::new(-s.im, s.re);
                }
            }
        });
        out
    }

    /// `max_k |Σ_j k_j coeff_j(k)| / ‖u‖_{L²}`; zero for the zero field.
    pub fn divergence_defect(&self) -> f64 {
        let norm = self.l2_norm();
        if norm == 0.0 {
            return 0.0;
        }
        let div = self.divergence();
        div.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max) / norm
    }

    pub fn is_divergence_free(&self) -> bool {
        self.divergence_defect() <= DIVERGENCE_TOL
    }

    /// Spectral inner product `Re Σ_j Σ_k coeff_j(k) conj(other_j(k))`.
    pub fn inner(&self, other: &VelocityField) -> f64 {
        self.comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| {
                a.coeffs()
                    .iter()
                    .zip(b.coeffs())
                    .map(|(x, y)| (x * y.conj()).re)
                    .sum::<f64>()
            })
            .sum()
    }

    /// `max_j max_k |self_j(k) - other_j(k)|`.
    pub fn max_abs_diff(&self, other: &VelocityField) -> f64 {
        self.comps
            .iter()
            .zip(&other.comps)
            .flat_map(|(a, b)| a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max)
    }

    /// `max_j max_k |coeff_j(k)|`.
    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.coeffs().iter().map(|z| z.norm()))
            .fold(0.0, f64::max)
    }
}
