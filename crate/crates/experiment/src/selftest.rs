//! Quick invariant checks run by `gns selftest`.

use gns_core::diagnostics::{beta, lambda_subcritical, p_gamma};
use gns_core::operator::{heat_semigroup, leray_project, navier_stokes_coeffs, QOperator};
use gns_core::spectral::{Grid, SpectralField};

use crate::initial_data::{random_band, taylor_green};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tol: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.value <= self.tol
    }
}

pub fn run() -> Vec<Check> {
    let g = Grid::new(16, 2.0 * std::f64::consts::PI).expect("valid grid");
    let u = random_band(g, 1.0, 2.0, 1.0, 5.0, 11).expect("band fits the grid");
    let mut out = Vec::new();

    let phys = u.component(0).inverse_transform().expect("finite field");
    let back = SpectralField::forward_transform(g, &phys).expect("finite field");
    let err = u
        .component(0)
        .coeffs()
        .iter()
        .zip(back.coeffs())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    out.push(Check { name: "fft round trip", value: err, tol: 1e-13 });

    let mut v = u.clone();
    v.axpy(0.7, &taylor_green(g, 2.0));
    let raw = {
        let mut w = v.clone();
        w.component_mut(0).coeffs_mut()[g.index_of_mode([1, 2, 0])] += 0.5;
        w
    };
    let p = leray_project(&raw);
    out.push(Check {
        name: "leray idempotent",
        value: leray_project(&p).max_abs_diff(&p),
        tol: 1e-14,
    });
    out.push(Check { name: "leray divergence", value: p.divergence_defect(), tol: 1e-12 });

    let two = heat_semigroup(&heat_semigroup(&u, 0.1).unwrap(), 0.2).unwrap();
    let one = heat_semigroup(&u, 0.3).unwrap();
    out.push(Check { name: "heat semigroup", value: two.max_abs_diff(&one), tol: 1e-14 });

    let q = QOperator::new(&navier_stokes_coeffs()).apply_same(&u).unwrap();
    out.push(Check { name: "Q divergence-free", value: q.divergence_defect(), tol: 1e-12 });
    out.push(Check { name: "Q hermitian", value: q.hermitian_defect(), tol: 1e-12 });

    let e = |x: f64| x.exp();
    let formula = [
        (beta(e(-4.0), 1.0, 0.0).unwrap(), 1.0),
        (lambda_subcritical(e(-4.0), 1.0, 1.0).unwrap(), (4.0 + 4f64.ln() + 3.0).sqrt()),
        (p_gamma(1.0).unwrap(), 8.0),
        (p_gamma(2.0).unwrap(), 4.0),
    ]
    .iter()
    .map(|(a, b)| (a - b).abs())
    .fold(0.0, f64::max);
    out.push(Check { name: "formula hand values", value: formula, tol: 1e-12 });
    out
}
