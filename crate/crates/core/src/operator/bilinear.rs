use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{OperatorError, QCoefficients, VelocityField};
use crate::par;
use crate::spectral::{Grid, SpectralField};

/// Sorted index triples `a ≤ b ≤ c`, one per cubic monomial `k_a k_b k_c`.
const MONOMIALS: [[usize; 3]; 10] = [
    [0, 0, 0],
    [0, 0, 1],
    [0, 0, 2],
    [0, 1, 1],
    [0, 1, 2],
    [0, 2, 2],
    [1, 1, 1],
    [1, 1, 2],
    [1, 2, 2],
    [2, 2, 2],
];

/// Unordered component pairs `(k, ℓ)` with `k ≤ ℓ`.
const SYM_PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

fn monomial_index(mut t: [usize; 3]) -> usize {
    t.sort_unstable();
    MONOMIALS.iter().position(|&m| m == t).expect("sorted triple")
}

fn sym_slot(k: usize, l: usize) -> usize {
    let (a, b) = if k <= l { (k, l) } else { (l, k) };
    SYM_PAIRS.iter().position(|&p| p == (a, b)).expect("pair")
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Term {
    slot: usize,
    mono: usize,
    coef: f64,
}

fn compress(map: BTreeMap<(usize, usize), f64>) -> Vec<Term> {
    map.into_iter()
        .filter(|&(_, c)| c != 0.0)
        .map(|((slot, mono), coef)| Term { slot, mono, coef })
        .collect()
}

/// `Q` compiled for evaluation.
///
/// Contracting `α^{j,m,n,p}_{k,ℓ}` against `k_m k_n k_p` leaves, for each
/// output component, a short list of (product, monomial, weight) terms. The
/// symmetric table serves `Q(u, u)`, where `u^k u^ℓ = u^ℓ u^k` lets the two
/// orderings share one product.
#[derive(Debug, Clone)]
pub struct QOperator {
    ordered: [Vec<Term>; 3],
    symmetric: [Vec<Term>; 3],
}

impl QOperator {
    pub fn new(coeffs: &QCoefficients) -> Self {
        let mut ordered: [BTreeMap<(usize, usize), f64>; 3] = Default::default();
        let mut symmetric: [BTreeMap<(usize, usize), f64>; 3] = Default::default();
        for (j, (ord, sym)) in ordered.iter_mut().zip(symmetric.iter_mut()).enumerate() {
            for m in 0..3 {
                for n in 0..3 {
                    for p in 0..3 {
                        let mono = monomial_index([m, n, p]);
                        for k in 0..3 {
                            for l in 0..3 {
                                let a = coeffs.get(j, m, n, p, k, l);
                                if a == 0.0 {
                                    continue;
                                }
                                *ord.entry((k * 3 + l, mono)).or_default() += a;
                                *sym.entry((sym_slot(k, l), mono)).or_default() += a;
                            }
                        }
                    }
                }
            }
        }
        Self {
            ordered: ordered.map(compress),
            symmetric: symmetric.map(compress),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ordered.iter().all(|t| t.is_empty())
    }

    /// `Q(u, v)`, order-sensitive.
    pub fn apply(&self, u: &VelocityField, v: &VelocityField) -> Result<VelocityField, OperatorError> {
        u.check_grid(v)?;
        let grid = *u.grid();
        if self.is_zero() {
            return Ok(VelocityField::zeros(grid));
        }
        let up = u.to_physical()?;
        let vp = v.to_physical()?;
        Ok(self.apply_physical(grid, &up, Some(&vp)))
    }

    /// `Q(u, u)` using six symmetric products.
    pub fn apply_same(&self, u: &VelocityField) -> Result<VelocityField, OperatorError> {
        let grid = *u.grid();
        if self.is_zero() {
            return Ok(VelocityField::zeros(grid));
        }
        let up = u.to_physical()?;
        Ok(self.apply_same_physical(grid, &up))
    }

    /// `Q(u, v)` from physical components; `v = None` means `v = u`.
    pub(crate) fn apply_physical(
        &self,
        grid: Grid,
        up: &[Vec<f64>; 3],
        vp: Option<&[Vec<f64>; 3]>,
    ) -> VelocityField {
        match vp {
            None => self.apply_same_physical(grid, up),
            Some(vp) => {
                if self.is_zero() {
                    return VelocityField::zeros(grid);
                }
                let mut needed = [false; 9];
                self.ordered.iter().flatten().for_each(|t| needed[t.slot] = true);
                let products: Vec<Option<SpectralField>> = (0..9)
                    .map(|s| needed[s].then(|| product(grid, &up[s / 3], &vp[s % 3])))
                    .collect();
                self.contract(grid, &self.ordered, &products)
            }
        }
    }

    /// `Q(u, u)` from already transformed physical components.
    pub(crate) fn apply_same_physical(&self, grid: Grid, up: &[Vec<f64>; 3]) -> VelocityField {
        if self.is_zero() {
            return VelocityField::zeros(grid);
        }
        let mut needed = [false; 6];
        self.symmetric.iter().flatten().for_each(|t| needed[t.slot] = true);
        let products: Vec<Option<SpectralField>> = SYM_PAIRS
            .iter()
            .enumerate()
            .map(|(s, &(k, l))| needed[s].then(|| product(grid, &up[k], &up[l])))
            .collect();
        self.contract(grid, &self.symmetric, &products)
    }

    fn contract(
        &self,
        grid: Grid,
        terms: &[Vec<Term>; 3],
        products: &[Option<SpectralField>],
    ) -> VelocityField {
        let n = grid.n();
        let plane = n * n;
        let ax = grid.axis_wavenumbers();
        let nyq = n / 2;
        let zero = Complex64::default();
        let mut buf = vec![zero; 3 * grid.len()];
        par::for_each_chunk_mut(&mut buf, 3 * plane, |i1, chunk| {
            if n % 2 == 0 && i1 == nyq {
                return;
            }
            let k1 = ax[i1];
            for i2 in 0..n {
                if n % 2 == 0 && i2 == nyq {
                    continue;
                }
                let k2 = ax[i2];
                for i3 in 0..n {
                    if n % 2 == 0 && i3 == nyq {
                        continue;
                    }
                    let k3 = ax[i3];
                    let r2 = k1 * k1 + k2 * k2 + k3 * k3;
                    if r2 == 0.0 {
                        continue;
                    }
                    let idx = (i1 * n + i2) * n + i3;
                    let kv = [k1, k2, k3];
                    let mut mono = [0.0; 10];
                    for (slot, t) in mono.iter_mut().zip(MONOMIALS.iter()) {
                        *slot = kv[t[0]] * kv[t[1]] * kv[t[2]] / r2;
                    }
                    let local = (i2 * n + i3) * 3;
                    for j in 0..3 {
                        let mut acc = zero;
                        for t in &terms[j] {
                            if let Some(p) = &products[t.slot] {
                                acc += p.coeffs()[idx] * (t.coef * mono[t.mono]);
                            }
                        }
                        // multiplication by i from the derivative
                        chunk[local + j] = Complex64::new(-acc.im, acc.re);
                    }
                }
            }
        });
        let mut comps = [
            Vec::with_capacity(grid.len()),
            Vec::with_capacity(grid.len()),
            Vec::with_capacity(grid.len()),
        ];
        for c in buf.chunks_exact(3) {
            comps[0].push(c[0]);
            comps[1].push(c[1]);
            comps[2].push(c[2]);
        }
        let [a, b, c] = comps.map(|v| SpectralField::from_coeffs(grid, v).expect("grid sized"));
        VelocityField::new([a, b, c]).expect("shared grid")
    }
}

/// Dealiased spectrum of the pointwise product `a·b`.
fn product(grid: Grid, a: &[f64], b: &[f64]) -> SpectralField {
    let p: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
    let mut f = SpectralField::forward_transform(grid, &p).expect("grid sized");
    f.dealias_in_place();
    f
}

/// One-shot `Q(u, v)` for the given coefficients.
pub fn apply_q(
    coeffs: &QCoefficients,
    u: &VelocityField,
    v: &VelocityField,
) -> Result<VelocityField, OperatorError> {
    QOperator::new(coeffs).apply(u, v)
}
