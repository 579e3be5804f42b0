mod common;

use common::{grid, random_field};
use gns_core::diagnostics::estimates::{
    bilinear_estimate, kernel_high_estimate, kernel_low_estimate, lp_norm, sample_times,
};
use gns_core::diagnostics::{
    beta, bound_report, estimate_radius, estimate_radius_with, eta_j, gevrey_norm,
    lambda_critical, lambda_subcritical, p_gamma, sobolev_norm, x_norm, y_norm, zeta_j,
    BoundMode, BoundReport, DiagnosticsError, FitModel, NormParams, RadiusOptions,
};
use gns_core::mild::Trajectory;
use gns_core::operator::{heat_semigroup, navier_stokes_coeffs, QOperator, VelocityField};
use gns_core::spectral::Grid;
use gns_core::Complex64;

fn single(g: Grid, m: [i64; 3], comp: usize, amp: f64) -> VelocityField {
    let mut u = VelocityField::zeros(g);
    u.component_mut(comp).set_mode(m, Complex64::new(amp, 0.0));
    u
}

/// Every lattice mode (including those beyond the dealiased cube) set to
/// `profile(|k|)` in component 0.
fn radial(g: Grid, profile: impl Fn(f64) -> f64) -> VelocityField {
    let mut u = VelocityField::zeros(g);
    let c = u.component_mut(0).coeffs_mut();
    for (idx, z) in c.iter_mut().enumerate() {
        *z = Complex64::new(profile(g.k_abs(idx)), 0.0);
    }
    u
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn sobolev_examples() {
    let g = grid(8);
    let u = single(g, [1, 0, 0], 1, 1.0);
    assert!(close(sobolev_norm(&u, 0.5, true).unwrap(), 1.0, 1e-15));
    assert!(close(sobolev_norm(&u, 2.0, false).unwrap(), 2.0, 1e-15));
    let r = random_field(g, 1, 0.0, 4.0, 1.0, false);
    assert!(close(sobolev_norm(&r, 0.0, false).unwrap(), r.l2_norm(), 1e-14));
}

#[test]
fn gevrey_examples() {
    let g = grid(8);
    let r = random_field(g, 2, 1.0, 4.0, 1.0, true);
    assert_eq!(gevrey_norm(&r, 0.0, 0.7).unwrap(), sobolev_norm(&r, 0.7, true).unwrap());
    let u = single(g, [0, 2, 0], 0, 1.0);
    assert!(close(gevrey_norm(&u, 0.5, 0.0).unwrap(), 1f64.exp(), 1e-14));
    let mut prev = 0.0;
    for rr in [0.0, 0.1, 0.5, 1.0, 3.0] {
        let v = gevrey_norm(&r, rr, 0.5).unwrap();
        assert!(v >= prev);
        prev = v;
    }
    assert!(gevrey_norm(&r, 1000.0, 0.0).unwrap().is_infinite());
    // heat flow: finite and decreasing in t for fixed r
    let mut prev = f64::INFINITY;
    for t in [0.01, 0.05, 0.2] {
        let v = gevrey_norm(&heat_semigroup(&r, t).unwrap(), 0.3, 0.0).unwrap();
        assert!(v.is_finite() && v < prev);
        prev = v;
    }
}

fn static_traj(u: &VelocityField, times: &[f64]) -> Trajectory {
    Trajectory::new(times.to_vec(), vec![u.clone(); times.len()]).unwrap()
}

#[test]
fn tail_functionals() {
    let g = grid(16);
    let u0 = random_field(g, 3, 1.0, 5.0, 1.0, true);
    let times = [0.0, 0.01, 0.02];
    let states = times.iter().map(|&t| heat_semigroup(&u0, t).unwrap()).collect();
    let traj = Trajectory::new(times.to_vec(), states).unwrap();
    assert_eq!(eta_j(&traj, 200.0 * g.k_max(), 1.0, 0.02).unwrap(), 0.0);
    assert!(close(
        eta_j(&traj, 1e-9, 1.0, 0.02).unwrap(),
        sobolev_norm(&u0, 1.0, true).unwrap(),
        1e-14
    ));
    assert_eq!(zeta_j(&traj, g.k_max() * 1.01, 0.5, 0.02).unwrap(), 0.0);
    for j in [0.5, 2.0, 3.3] {
        assert_eq!(
            zeta_j(&traj, j, 0.5, 0.01).unwrap(),
            eta_j(&traj, 100.0 * j, 0.5, 0.01).unwrap()
        );
    }
    let mut prev = f64::INFINITY;
    for j in [100.0, 200.0, 300.0, 400.0] {
        let v = eta_j(&traj, j, 1.0, 0.02).unwrap();
        assert!(v <= prev);
        prev = v;
    }
    assert!(eta_j(&traj, 300.0, 1.0, 0.0).unwrap() >= eta_j(&traj, 300.0, 1.0, 0.02).unwrap());
}

#[test]
fn tail_matches_brute_force_sum() {
    let g = grid(16);
    let gamma = 1.0;
    let u = radial(g, |k| if k == 0.0 { 0.0 } else { k.powf(-gamma - 1.5) });
    let traj = static_traj(&u, &[0.0, 1.0]);
    for j in [100.0, 250.0, 400.0, 700.0] {
        let cut = 0.01 * j;
        let mut brute = 0.0;
        for a in -8i64..8 {
            for b in -8i64..8 {
                for c in -8i64..8 {
                    let k = ((a * a + b * b + c * c) as f64).sqrt();
                    if k >= cut && k > 0.0 {
                        brute += k.powf(2.0 * gamma) * k.powf(-2.0 * gamma - 3.0);
                    }
                }
            }
        }
        let got = eta_j(&traj, j, gamma, 1.0).unwrap();
        assert!(close(got, brute.sqrt(), 1e-12), "J = {j}");
    }
}

#[test]
fn formula_hand_values() {
    let e = |x: f64| x.exp();
    assert!(close(beta(e(-4.0), 1.0, 0.0).unwrap(), 1.0, 1e-12));
    assert!(close(beta(e(-4.0), 1.0, e(-10.0)).unwrap(), 1.0, 1e-12));
    assert!(close(beta(e(-8.0), 1.5, 0.5).unwrap(), 2f64.ln(), 1e-12));
    assert!(beta(1.0, 1.0, 0.1).is_err());
    assert!(close(
        lambda_subcritical(e(-4.0), 1.0, 1.0).unwrap(),
        (4.0 + 4f64.ln() + 3.0).sqrt(),
        1e-12
    ));
    assert!(close(lambda_subcritical(e(-4.0), 1.0, 1.0).unwrap(), 2.8959, 1e-4));
    assert!(lambda_subcritical(0.5, 1.0, 0.0).is_err());
    assert!(close(lambda_critical(e(-3.0), 0.0).unwrap(), 3.0, 1e-12));
    assert!(close(lambda_critical(e(-9.0), e(-1.0)).unwrap(), 3f64.sqrt(), 1e-12));
    assert_eq!(p_gamma(0.5).unwrap(), 4.0);
    assert_eq!(p_gamma(1.0).unwrap(), 8.0);
    assert_eq!(p_gamma(2.0).unwrap(), 4.0);
    assert!(p_gamma(0.4).is_err());
}

#[test]
fn formula_limits_and_bounds() {
    // λ → 0 like √(2ε|ln t|) as γ → ½
    let t = 1e-3f64;
    for eps in [1e-2, 1e-4, 1e-6] {
        let l = lambda_subcritical(t, 0.5 + eps, 0.0).unwrap();
        let want = (2.0 * eps * (t.ln().abs() + t.ln().abs().ln())).sqrt();
        assert!(close(l, want, 1e-12));
    }
    for &t in &[1e-6, 1e-4, 0.01, 0.3] {
        for &b in &[0.0, 0.5, 3.0] {
            let l = lambda_subcritical(t, 1.2, b).unwrap();
            let lt = t.ln().abs();
            assert!(l * t.sqrt() >= ((2.0 * 1.2 - 1.0) * t * (lt + lt.ln())).sqrt() - 1e-15);
            assert!(l * t.sqrt() / (t * lt).sqrt() >= (2.0 * 1.2 - 1.0f64).sqrt() - 1e-15);
        }
        let cap = 0.5 * (1.2 - 0.5) * t.ln().abs();
        let small = t.powf((1.2 - 0.5) / 2.0);
        assert!(close(beta(t, 1.2, small).unwrap(), cap, 1e-12));
        assert!(beta(t, 1.2, 0.9).unwrap() <= cap);
    }
    // critical predictor grows as t → 0 along a decreasing ζ sequence
    let mut prev = 0.0;
    for (t, z) in [(1e-2, 0.3), (1e-4, 0.1), (1e-6, 1e-3), (1e-8, 1e-6)] {
        let l = lambda_critical(t, z).unwrap();
        assert!(l > prev);
        prev = l;
    }
}

#[test]
fn working_norm_reductions() {
    let g = grid(8);
    let u = random_field(g, 4, 1.0, 3.0, 1.0, true);
    let times = [0.0, 0.25, 0.5, 1.0];
    let traj = static_traj(&u, &times);
    let p = NormParams::new(1.0, 0.1, 1.0, 0.0);
    let want = sobolev_norm(&u, 0.6, true).unwrap();
    assert!(close(x_norm(&traj, &p).unwrap(), want, 1e-14));
    let zero = static_traj(&VelocityField::zeros(g), &times);
    let p = NormParams::new(1.0, 0.1, 1.0, 4.0);
    assert_eq!(x_norm(&zero, &p).unwrap(), 0.0);
    assert_eq!(y_norm(&zero, &p).unwrap(), 0.0);
    // homogeneity and subadditivity
    let v = random_field(g, 5, 1.0, 3.0, 1.0, true);
    let tv = static_traj(&v, &times);
    let tuv = static_traj(&u.add(&v), &times);
    let tu3 = static_traj(&u.scaled(-3.0), &times);
    for f in [x_norm, y_norm] {
        assert!(close(f(&tu3, &p).unwrap(), 3.0 * f(&traj, &p).unwrap(), 1e-13));
        assert!(f(&tuv, &p).unwrap() <= f(&traj, &p).unwrap() + f(&tv, &p).unwrap() + 1e-12);
    }
}

#[test]
fn working_norms_single_mode_oracle() {
    let g = grid(16);
    let (delta, big_t, lam) = (0.1, 0.04, 2.0);
    let p = NormParams::new(1.0, delta, big_t, lam);
    // |k| = 3 sits above both cutoffs, 0.01·λ/√T = 0.1 and T^{-1/4} ≈ 2.24
    let m = [3, 0, 0];
    let u0 = single(g, m, 1, 1.0);
    let times: Vec<f64> = (0..=20).map(|i| big_t * i as f64 / 20.0).collect();
    let states = times.iter().map(|&t| heat_semigroup(&u0, t).unwrap()).collect();
    let traj = Trajectory::new(times.clone(), states).unwrap();
    let k = 3.0f64;
    let want = times
        .iter()
        .map(|&t| {
            t.powf(delta / 2.0)
                * (-lam * lam * t / (4.0 * big_t) + lam * t * k / big_t.sqrt() - t * k * k).exp()
                * k.powf(delta + 0.5)
        })
        .fold(0.0, f64::max);
    assert!(close(x_norm(&traj, &p).unwrap(), want, 1e-10));
    assert!(close(y_norm(&traj, &p).unwrap(), want, 1e-10));
    // with T = 1 the Y cutoff is 1, which drops the zero mode
    let p1 = NormParams::new(1.0, delta, 1.0, 0.0);
    let mut c = u0.clone();
    c.component_mut(0).set_mode([0, 0, 0], Complex64::new(5.0, 0.0));
    let tc = static_traj(&c, &[0.0, 1.0]);
    assert!(close(y_norm(&tc, &p1).unwrap(), k.powf(delta + 0.5), 1e-12));
}

#[test]
fn radius_recovers_exponential_rate() {
    let g = grid(32);
    let u = radial(g, |k| 2.5 * (-0.3 * k).exp());
    for model in [FitModel::Exponential, FitModel::PowerExponential] {
        let opts = RadiusOptions {
            model,
            ..RadiusOptions::default()
        };
        let est = estimate_radius_with(&u, 2.0, 14.0, &opts).unwrap();
        assert!((est.radius - 0.3).abs() <= 0.015, "{model:?}: {}", est.radius);
        assert!(!est.capped && est.r2 > 0.99);
    }
    // amplitude invariance
    let a = estimate_radius(&u, 2.0, 14.0).unwrap();
    let b = estimate_radius(&u.scaled(1e-40), 2.0, 14.0).unwrap();
    assert!((a.radius - b.radius).abs() < 1e-10);
}

#[test]
fn radius_capped_for_compact_spectrum() {
    let g = grid(16);
    let u = random_field(g, 6, 1.0, 2.0, 1.0, true);
    let est = estimate_radius(&u, 4.0, 10.0).unwrap();
    assert!(est.capped);
    assert!(est.radius > 0.0 && est.radius.is_finite());
}

#[test]
fn radius_inconclusive_with_few_shells() {
    let g = grid(16);
    let u = radial(g, |k| (-0.3 * k).exp());
    match estimate_radius(&u, 2.0, 4.5) {
        Err(DiagnosticsError::Inconclusive(fit)) => assert!(fit.k.len() < 5),
        other => panic!("expected inconclusive fit, got {other:?}"),
    }
}

#[test]
fn radius_of_heat_kernel_is_window_local() {
    let g = grid(32);
    let t = 0.02;
    let u = radial(g, |k| (-t * k * k).exp());
    let opts = RadiusOptions {
        model: FitModel::Exponential,
        ..RadiusOptions::default()
    };
    let mut prev = 0.0;
    for lo in [2.0, 4.0, 6.0] {
        let est = estimate_radius_with(&u, lo, lo + 8.0, &opts).unwrap();
        assert!(est.radius >= t * lo);
        assert!(est.radius > prev);
        prev = est.radius;
    }
}

#[test]
fn bound_report_on_heat_flow() {
    let g = grid(32);
    let u0 = radial(g, |k| if k == 0.0 { 0.0 } else { 1.0 });
    let times: Vec<f64> = vec![0.0, 1e-3, 3e-3, 1e-2];
    let states = times.iter().map(|&t| heat_semigroup(&u0, t).unwrap()).collect();
    let traj = Trajectory::new(times, states).unwrap();
    let opts = RadiusOptions {
        model: FitModel::Exponential,
        ..RadiusOptions::default()
    };
    let (lo, hi) = (4.0, 16.0);
    let rep = bound_report(&traj, 1.0, BoundMode::Subcritical, (lo, hi), &[3e-3, 1e-2], &opts).unwrap();
    for (i, &t) in rep.times.iter().enumerate() {
        // ln e^{-t|k|²} has least-squares slope ≈ -t(lo + hi) over the window
        let want = t * (lo + hi);
        assert!((rep.measured_radius[i] - want).abs() <= 0.1 * want, "t = {t}");
        assert!(rep.predictor[i] > 0.0);
        assert!(close(rep.ratio[i], rep.measured_radius[i] / rep.predictor[i], 1e-15));
    }
    let csv = rep.to_csv();
    assert!(csv.starts_with(BoundReport::CSV_HEADER));
    assert_eq!(csv.lines().count(), 3);
    let json: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
    assert_eq!(json["parameters"]["mode"], "subcritical");
}

#[test]
fn bound_report_compact_spectrum_is_capped() {
    let g = grid(16);
    let u0 = random_field(g, 7, 1.0, 2.0, 1.0, true);
    let traj = static_traj(&u0, &[0.0, 0.01]);
    let rep = bound_report(&traj, 0.5, BoundMode::Critical, (4.0, 12.0), &[1e-3, 1e-2], &RadiusOptions::default()).unwrap();
    assert!(rep.capped.iter().all(|&c| c));
    assert!(rep.ratio.iter().all(|r| r.is_infinite()));
    assert!(bound_report(&traj, 0.7, BoundMode::Critical, (4.0, 12.0), &[1e-3], &RadiusOptions::default()).is_err());
}

#[test]
fn estimate_sides_are_finite_and_positive() {
    let g = grid(16);
    let f = random_field(g, 8, 1.0, 5.0, 0.3, true);
    let h = random_field(g, 9, 1.0, 5.0, 0.3, true);
    let p = NormParams::new(1.0, 0.1, 0.01, 4.0);
    let times = sample_times(0.01, 10);
    let op = QOperator::new(&navier_stokes_coeffs());
    let s = bilinear_estimate(&op, &f, &h, &p, &times).unwrap();
    assert!(s.lhs > 0.0 && s.rhs.is_finite() && s.rhs > 0.0);
    assert_eq!(s.rhs_terms.len(), 3);
    let lo = kernel_low_estimate(&f, &p, &times).unwrap();
    assert!(lo.lhs > 0.0 && lo.rhs > 0.0);
    // no modes above 2N₀ = 40 on this grid
    assert_eq!(kernel_high_estimate(&f, &p, &times).unwrap().lhs, 0.0);
    // L^p of a constant vector field is its length
    let mut c = VelocityField::zeros(g);
    c.component_mut(0).set_mode([0, 0, 0], Complex64::new(3.0, 0.0));
    c.component_mut(1).set_mode([0, 0, 0], Complex64::new(4.0, 0.0));
    let got = lp_norm(&c, 1.7).unwrap();
    assert!(close(got, 5.0, 1e-12), "{got}");
}

#[test]
fn bound_report_json_round_trip() {
    let g = grid(16);
    let u0 = random_field(g, 7, 1.0, 2.0, 1.0, true);
    let traj = static_traj(&u0, &[0.0, 0.01]);
    let rep = bound_report(&traj, 0.5, BoundMode::Critical, (4.0, 12.0), &[1e-3, 1e-2], &RadiusOptions::default()).unwrap();
    let back = BoundReport::from_json(&rep.to_json()).unwrap();
    assert_eq!(back.to_json(), rep.to_json());
    assert!(back.beta.iter().all(|b| b.is_nan()));
    assert!(BoundReport::from_json("{}").is_err());
}
