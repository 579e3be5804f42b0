#![allow(dead_code)]

use gns_core::operator::{leray_project, VelocityField};
use gns_core::spectral::{Grid, SpectralField};
use gns_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub fn grid(n: usize) -> Grid {
    Grid::new(n, 2.0 * PI).unwrap()
}

/// `A (sin x cos y cos z, -cos x sin y cos z, 0)` scaled to the box.
pub fn taylor_green(g: Grid, amplitude: f64) -> VelocityField {
    let n = g.n();
    let s = 2.0 * PI / g.period();
    let mut u = vec![vec![0.0; g.len()], vec![0.0; g.len()], vec![0.0; g.len()]];
    for i1 in 0..n {
        for i2 in 0..n {
            for i3 in 0..n {
                let (x, y, z) = (s * g.coordinate(i1), s * g.coordinate(i2), s * g.coordinate(i3));
                let idx = g.index(i1, i2, i3);
                u[0][idx] = amplitude * x.sin() * y.cos() * z.cos();
                u[1][idx] = -amplitude * x.cos() * y.sin() * z.cos();
            }
        }
    }
    let [a, b, c]: [Vec<f64>; 3] = u.try_into().unwrap();
    VelocityField::from_physical(g, &[a, b, c]).unwrap()
}

/// Random Hermitian field with coefficients of size ~`amp` on `lo ≤ |k| ≤ hi`
/// (axis indices inside the dealiased cube), optionally Leray-projected.
pub fn random_field(g: Grid, seed: u64, lo: f64, hi: f64, amp: f64, project: bool) -> VelocityField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = VelocityField::zeros(g);
    let lim = g.dealias_index_limit();
    for idx in 0..g.len() {
        let neg = g.neg_index(idx);
        if neg < idx || g.is_nyquist(idx) {
            continue;
        }
        let m = g.mode(idx);
        if m.iter().any(|&x| x.abs() as f64 > lim) {
            continue;
        }
        let k = g.k_abs(idx);
        if k < lo || k > hi || k == 0.0 {
            continue;
        }
        for j in 0..3 {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * amp;
            u.component_mut(j).set_mode_pair(m, z);
        }
    }
    if project {
        leray_project(&u)
    } else {
        u
    }
}

pub fn random_scalar(g: Grid, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phys: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    SpectralField::forward_transform(g, &phys).unwrap()
}

/// `max |a - b| / max |b|`.
pub fn rel_max_diff(a: &VelocityField, b: &VelocityField) -> f64 {
    let scale = b.max_abs().max(f64::MIN_POSITIVE);
    a.max_abs_diff(b) / scale
}
