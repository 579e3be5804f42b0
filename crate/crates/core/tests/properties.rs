mod common;

use common::{grid, random_field, random_scalar};
use gns_core::operator::{heat_semigroup, leray_project, navier_stokes_coeffs, QOperator};
use gns_core::spectral::SpectralField;
use proptest::prelude::*;

fn cfg() -> ProptestConfig {
    ProptestConfig::with_cases(24)
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn transform_round_trip(seed in any::<u64>(), n in prop::sample::select(vec![4usize, 6, 8, 12])) {
        let g = grid(n);
        let f = random_scalar(g, seed);
        let phys = f.inverse_transform().unwrap();
        let back = SpectralField::forward_transform(g, &phys).unwrap().inverse_transform().unwrap();
        let err = phys.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-13);
    }

    #[test]
    fn parseval(seed in any::<u64>()) {
        let g = grid(8);
        let f = random_scalar(g, seed);
        let phys = f.inverse_transform().unwrap();
        let mean = phys.iter().map(|x| x * x).sum::<f64>() / phys.len() as f64;
        prop_assert!((mean - f.energy()).abs() <= 1e-12 * mean.max(1.0));
    }

    #[test]
    fn q_is_bilinear(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let g = grid(8);
        let op = QOperator::new(&navier_stokes_coeffs());
        let u = random_field(g, seed, 1.0, 3.0, 1.0, true);
        let v = random_field(g, seed ^ 1, 1.0, 3.0, 1.0, true);
        let w = random_field(g, seed ^ 2, 1.0, 3.0, 1.0, true);
        let lhs = op.apply(&u.scaled(a).add(&v.scaled(b)), &w).unwrap();
        let rhs = op.apply(&u, &w).unwrap().scaled(a).add(&op.apply(&v, &w).unwrap().scaled(b));
        let scale = 1.0 + lhs.max_abs();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * scale);
        let lhs = op.apply(&w, &u.scaled(a).add(&v.scaled(b))).unwrap();
        let rhs = op.apply(&w, &u).unwrap().scaled(a).add(&op.apply(&w, &v).unwrap().scaled(b));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * scale);
    }

    #[test]
    fn leray_is_self_adjoint_projection(seed in any::<u64>()) {
        let g = grid(8);
        let u = random_field(g, seed, 0.0, 4.0, 1.0, false);
        let v = random_field(g, seed ^ 7, 0.0, 4.0, 1.0, false);
        let pu = leray_project(&u);
        prop_assert!(leray_project(&pu).max_abs_diff(&pu) <= 1e-14);
        prop_assert!(pu.divergence_defect() <= 1e-12);
        let a = pu.inner(&v);
        let b = u.inner(&leray_project(&v));
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn heat_semigroup_composes(seed in any::<u64>(), s in 0.0f64..0.5, t in 0.0f64..0.5) {
        let g = grid(8);
        let u = random_field(g, seed, 0.0, 4.0, 1.0, true);
        let two = heat_semigroup(&heat_semigroup(&u, s).unwrap(), t).unwrap();
        let one = heat_semigroup(&u, s + t).unwrap();
        prop_assert!(two.max_abs_diff(&one) <= 1e-14);
        prop_assert!(one.energy() <= u.energy() + 1e-15);
    }
}
