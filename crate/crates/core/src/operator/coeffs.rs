use serde::{Deserialize, Serialize};
use std::path::Path;

use super::OperatorError;

/// Number of entries of the coefficient tensor `α^{j,m,n,p}_{k,ℓ}`.
pub const N_ALPHA: usize = 729;

/// Real tensor `α^{j,m,n,p}_{k,ℓ}` defining the bilinear map
/// `Q^j(u,v) = Σ_{k,ℓ,m} q^{j,m}_{k,ℓ}(D) ∂_m(u^k v^ℓ)` with symbol
/// `q^{j,m}_{k,ℓ}(ξ) = Σ_{n,p} α^{j,m,n,p}_{k,ℓ} ξ_n ξ_p / |ξ|²`.
///
/// Indices are 0-based in code. The flat storage (and the JSON format) orders
/// them as `(j, m, n, p, k, ℓ)` with `j` slowest and `ℓ` fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct QCoefficients {
    alpha: Vec<f64>,
}

#[inline]
pub const fn flat_index(j: usize, m: usize, n: usize, p: usize, k: usize, l: usize) -> usize {
    ((((j * 3 + m) * 3 + n) * 3 + p) * 3 + k) * 3 + l
}

impl TryFrom<Vec<f64>> for QCoefficients {
    type Error = OperatorError;

    fn try_from(alpha: Vec<f64>) -> Result<Self, Self::Error> {
        if alpha.len() != N_ALPHA {
            return Err(OperatorError::Coefficients(format!(
                "expected {N_ALPHA} entries, found {}",
                alpha.len()
            )));
        }
        if let Some(pos) = alpha.iter().position(|a| !a.is_finite()) {
            return Err(OperatorError::Coefficients(format!(
                "entry {pos} is not finite"
            )));
        }
        Ok(Self { alpha })
    }
}

impl From<QCoefficients> for Vec<f64> {
    fn from(q: QCoefficients) -> Self {
        q.alpha
    }
}

impl QCoefficients {
    pub fn zeros() -> Self {
        Self {
            alpha: vec![0.0; N_ALPHA],
        }
    }

    #[inline]
    pub fn get(&self, j: usize, m: usize, n: usize, p: usize, k: usize, l: usize) -> f64 {
        self.alpha[flat_index(j, m, n, p, k, l)]
    }

    #[inline]
    pub fn set(&mut self, j: usize, m: usize, n: usize, p: usize, k: usize, l: usize, value: f64) {
        self.alpha[flat_index(j, m, n, p, k, l)] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.alpha
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.iter().all(|&a| a == 0.0)
    }

    /// Coefficients for which `Q(u, v) = -ℙ ∇·(u ⊗ v)`, i.e.
    /// `Q^j(u,v) = -Σ_{m,ℓ} (δ_{jℓ} - ξ_jξ_ℓ/|ξ|²) ∂_m(u^m v^ℓ)`.
    ///
    /// The identity part is written as `δ_{jℓ} Σ_n ξ_nξ_n/|ξ|²`, so every
    /// entry is `0` or `±1`.
    pub fn navier_stokes() -> Self {
        let mut q = Self::zeros();
        for j in 0..3 {
            for m in 0..3 {
                for l in 0..3 {
                    let k = m;
                    if j == l {
                        for n in 0..3 {
                            let v = q.get(j, m, n, n, k, l) - 1.0;
                            q.set(j, m, n, n, k, l, v);
                        }
                    }
                    let v = q.get(j, m, j, l, k, l) + 1.0;
                    q.set(j, m, j, l, k, l, v);
                }
            }
        }
        q
    }

    /// Symbol `q^{j,m}_{k,ℓ}(ξ)`; zero at `ξ = 0`.
    pub fn q_symbol(&self, xi: [f64; 3], j: usize, m: usize, k: usize, l: usize) -> f64 {
        let r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if r2 == 0.0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for n in 0..3 {
            for p in 0..3 {
                acc += self.get(j, m, n, p, k, l) * xi[n] * xi[p];
            }
        }
        acc / r2
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.alpha).expect("finite reals serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, OperatorError> {
        let v: Vec<f64> = serde_json::from_str(text)
            .map_err(|e| OperatorError::Coefficients(e.to_string()))?;
        Self::try_from(v)
    }

    pub fn load(path: &Path) -> Result<Self, OperatorError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| OperatorError::Coefficients(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<(), OperatorError> {
        std::fs::write(path, self.to_json())
            .map_err(|e| OperatorError::Coefficients(format!("{}: {e}", path.display())))
    }
}

/// Free-function form of [`QCoefficients::q_symbol`].
pub fn q_symbol(coeffs: &QCoefficients, xi: [f64; 3], j: usize, m: usize, k: usize, l: usize) -> f64 {
    coeffs.q_symbol(xi, j, m, k, l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_examples() {
        let z = QCoefficients::zeros();
        assert_eq!(z.q_symbol([1.0, 2.0, 3.0], 0, 1, 2, 0), 0.0);

        let mut a = QCoefficients::zeros();
        a.set(0, 0, 0, 0, 0, 0, 1.0);
        assert_eq!(a.q_symbol([1.0, 0.0, 0.0], 0, 0, 0, 0), 1.0);

        let mut b = QCoefficients::zeros();
        b.set(0, 0, 0, 1, 0, 0, 1.0);
        assert!((b.q_symbol([1.0, 1.0, 0.0], 0, 0, 0, 0) - 0.5).abs() < 1e-15);
        assert_eq!(b.q_symbol([0.0, 0.0, 0.0], 0, 0, 0, 0), 0.0);
    }

    #[test]
    fn navier_stokes_symbol_is_minus_projector() {
        let q = QCoefficients::navier_stokes();
        let xi = [0.3, -1.2, 2.0];
        let r2: f64 = xi.iter().map(|x| x * x).sum();
        for j in 0..3 {
            for m in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let expect = if k == m {
                            -((j == l) as u8 as f64 - xi[j] * xi[l] / r2)
                        } else {
                            0.0
                        };
                        assert!((q.q_symbol(xi, j, m, k, l) - expect).abs() < 1e-14);
                    }
                }
            }
        }
        assert!(q.as_slice().iter().all(|&a| a == 0.0 || a == 1.0 || a == -1.0));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let q = QCoefficients::navier_stokes();
        assert_eq!(QCoefficients::from_json(&q.to_json()).unwrap(), q);
        assert!(QCoefficients::from_json("[1.0, 2.0]").is_err());
        // Index order: entry 1 is (j,m,n,p,k,ℓ) = (0,0,0,0,0,1).
        let mut v = vec![0.0; N_ALPHA];
        v[1] = 7.0;
        let q = QCoefficients::try_from(v).unwrap();
        assert_eq!(q.get(0, 0, 0, 0, 0, 1), 7.0);
        assert_eq!(flat_index(2, 2, 2, 2, 2, 2), N_ALPHA - 1);
    }
}
