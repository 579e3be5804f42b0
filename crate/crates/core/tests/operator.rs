mod common;

use common::{grid, random_field, rel_max_diff, taylor_green};
use gns_core::operator::{
    apply_q, heat_semigroup, leray_project, navier_stokes_coeffs, OperatorError, QCoefficients,
    QOperator, VelocityField,
};
use gns_core::spectral::{Grid, SpectralField};
use gns_core::Complex64;

/// `-ℙ ∇·(u ⊗ u)` written out directly: products, transform, dealias,
/// `w_ℓ = Σ_m i k_m P̂_{mℓ}`, project, negate.
fn leray_convection(u: &VelocityField) -> VelocityField {
    let g = *u.grid();
    let phys = u.to_physical().unwrap();
    let mut w = VelocityField::zeros(g);
    for l in 0..3 {
        for m in 0..3 {
            let prod: Vec<f64> = phys[m].iter().zip(&phys[l]).map(|(a, b)| a * b).collect();
            let p = SpectralField::forward_transform(g, &prod).unwrap().dealias();
            let out = w.component_mut(l).coeffs_mut();
            for idx in 0..g.len() {
                if g.is_nyquist(idx) {
                    continue;
                }
                let km = g.wavevector(idx)[m];
                out[idx] += Complex64::new(0.0, km) * p.coeffs()[idx];
            }
        }
    }
    let mut r = leray_project(&w);
    r.scale(-1.0);
    r
}

#[test]
fn navier_stokes_matches_leray_convection_oracle() {
    let g = grid(16);
    let q = navier_stokes_coeffs();
    for u in [taylor_green(g, 1.0), random_field(g, 7, 1.0, 4.0, 0.3, true)] {
        let got = apply_q(&q, &u, &u).unwrap();
        let want = leray_convection(&u);
        assert!(rel_max_diff(&got, &want) < 1e-12, "{}", rel_max_diff(&got, &want));
        let same = QOperator::new(&q).apply_same(&u).unwrap();
        assert!(rel_max_diff(&same, &want) < 1e-12);
    }
}

#[test]
fn navier_stokes_output_is_divergence_free_and_hermitian() {
    let g = grid(16);
    let q = navier_stokes_coeffs();
    let u = taylor_green(g, 1.0);
    let out = apply_q(&q, &u, &u).unwrap();
    assert!(!out.is_zero());
    assert!(out.divergence_defect() < 1e-10);
    assert!(out.hermitian_defect() < 1e-12);
    // no projection on the input: the output is still projected
    let v = random_field(g, 3, 1.0, 5.0, 0.2, false);
    let out = apply_q(&q, &v, &v).unwrap();
    assert!(out.divergence_defect() < 1e-10);
}

#[test]
fn zero_and_constant_inputs() {
    let g = grid(8);
    let q = navier_stokes_coeffs();
    let u = random_field(g, 1, 1.0, 2.0, 1.0, true);
    assert!(apply_q(&q, &u, &VelocityField::zeros(g)).unwrap().is_zero());
    let mut c = VelocityField::zeros(g);
    c.component_mut(0).set_mode([0, 0, 0], Complex64::new(1.5, 0.0));
    c.component_mut(2).set_mode([0, 0, 0], Complex64::new(-0.5, 0.0));
    assert!(apply_q(&q, &c, &c).unwrap().max_abs() < 1e-15);
    let zero = QCoefficients::zeros();
    assert!(apply_q(&zero, &u, &u).unwrap().is_zero());
}

#[test]
fn homogeneity_in_first_argument() {
    let g = grid(12);
    let q = navier_stokes_coeffs();
    let u = random_field(g, 11, 1.0, 3.0, 0.5, true);
    let v = random_field(g, 12, 1.0, 3.0, 0.5, true);
    let a = -1.7;
    let lhs = apply_q(&q, &u.scaled(a), &v).unwrap();
    let rhs = apply_q(&q, &u, &v).unwrap().scaled(a);
    assert!(rel_max_diff(&lhs, &rhs) < 1e-12);
}

#[test]
fn order_sensitive_for_general_coefficients() {
    let g = grid(8);
    let mut q = QCoefficients::zeros();
    q.set(0, 0, 0, 0, 0, 1, 1.0);
    let u = random_field(g, 5, 1.0, 2.0, 1.0, false);
    let v = random_field(g, 6, 1.0, 2.0, 1.0, false);
    let uv = apply_q(&q, &u, &v).unwrap();
    let vu = apply_q(&q, &v, &u).unwrap();
    assert!(uv.max_abs_diff(&vu) > 1e-6);
    // the symmetric path agrees with the ordered path on equal arguments
    let same = QOperator::new(&q).apply_same(&u).unwrap();
    assert!(rel_max_diff(&same, &apply_q(&q, &u, &u).unwrap()) < 1e-13);
}

#[test]
fn grid_mismatch_is_rejected() {
    let q = navier_stokes_coeffs();
    let u = VelocityField::zeros(grid(8));
    let v = VelocityField::zeros(Grid::new(8, 1.0).unwrap());
    assert!(matches!(apply_q(&q, &u, &v), Err(OperatorError::GridMismatch)));
}

/// Halving the period with doubled amplitude realizes `u_λ(x) = λu(λx)` for
/// `λ = 2`; `Q` is homogeneous of degree three under it.
#[test]
fn scaling_relabel_commutes_with_q() {
    let q = navier_stokes_coeffs();
    let g = grid(16);
    let u = random_field(g, 21, 1.0, 4.0, 0.4, true);
    let half = Grid::new(16, g.period() / 2.0).unwrap();
    let relabel = |f: &VelocityField, a: f64| {
        let comps = f.components().clone().map(|c| {
            let mut s = SpectralField::from_coeffs(half, c.into_coeffs()).unwrap();
            s.scale(a);
            s
        });
        VelocityField::new(comps).unwrap()
    };
    let lhs = apply_q(&q, &relabel(&u, 2.0), &relabel(&u, 2.0)).unwrap();
    let rhs = relabel(&apply_q(&q, &u, &u).unwrap(), 8.0);
    assert!(rel_max_diff(&lhs, &rhs) < 1e-12);
}

#[test]
fn leray_projector_properties() {
    let g = grid(12);
    // gradient field: coefficients parallel to k
    let mut grad = VelocityField::zeros(g);
    for (m, a) in [([1, 2, 0], 0.7), ([0, -1, 3], 1.1)] {
        for j in 0..3 {
            grad.component_mut(j)
                .set_mode_pair(m, Complex64::new(0.0, a * m[j] as f64));
        }
    }
    assert!(leray_project(&grad).max_abs() < 1e-15);

    let u = random_field(g, 31, 0.5, 5.0, 1.0, false);
    let pu = leray_project(&u);
    assert!(pu.is_divergence_free());
    assert!(pu.max_abs_diff(&leray_project(&pu)) < 1e-14);
    let v = random_field(g, 32, 0.5, 5.0, 1.0, false);
    let a = leray_project(&u).inner(&v);
    let b = u.inner(&leray_project(&v));
    assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    // zero mode untouched
    let mut c = VelocityField::zeros(g);
    c.component_mut(1).set_mode([0, 0, 0], Complex64::new(2.0, 0.0));
    assert_eq!(leray_project(&c), c);
}

#[test]
fn heat_semigroup_examples() {
    let g = grid(8);
    let u = random_field(g, 41, 0.5, 4.0, 1.0, true);
    assert_eq!(heat_semigroup(&u, 0.0).unwrap(), u);
    assert!(matches!(heat_semigroup(&u, -1e-3), Err(OperatorError::NegativeTime(_))));

    let mut one = VelocityField::zeros(g);
    one.component_mut(2).set_mode_pair([0, 1, 0], Complex64::new(1.0, 0.0));
    let h = heat_semigroup(&one, 1.0).unwrap();
    let got = h.component(2).mode([0, 1, 0]).re;
    assert!((got - (-1.0f64).exp()).abs() <= 1e-15);

    let (s, t) = (0.013, 0.041);
    let twice = heat_semigroup(&heat_semigroup(&u, t).unwrap(), s).unwrap();
    let once = heat_semigroup(&u, s + t).unwrap();
    assert!(twice.max_abs_diff(&once) <= 1e-14 * u.max_abs());

    let mut prev = f64::INFINITY;
    for t in [0.0, 0.01, 0.1, 1.0] {
        let n = heat_semigroup(&u, t).unwrap().sobolev_norm(1.5, false).unwrap();
        assert!(n <= prev);
        prev = n;
    }
}
