mod common;

use common::{grid, random_field, rel_max_diff, taylor_green};
use gns_core::mild::quadrature::gauss_legendre_unit;
use gns_core::mild::{
    duhamel_b, duhamel_series, etd_integrate, mild_residual, picard_solve, read_trajectory,
    write_trajectory, MildError, SolverConfig, TimeLattice, Trajectory,
};
use gns_core::operator::{
    apply_q, heat_semigroup, navier_stokes_coeffs, QCoefficients, VelocityField,
};
use gns_core::Complex64;

fn constant_trajectory(u: &VelocityField, t_final: f64, steps: usize) -> Trajectory {
    let times: Vec<f64> = (0..=steps).map(|i| t_final * i as f64 / steps as f64).collect();
    let states = vec![u.clone(); times.len()];
    Trajectory::new(times, states).unwrap()
}

fn heat_trajectory(u0: &VelocityField, t_final: f64, steps: usize) -> Trajectory {
    let times: Vec<f64> = (0..=steps).map(|i| t_final * i as f64 / steps as f64).collect();
    let states = times.iter().map(|&t| heat_semigroup(u0, t).unwrap()).collect();
    Trajectory::new(times, states).unwrap()
}

fn rel_l2(a: &VelocityField, b: &VelocityField) -> f64 {
    a.sub(b).l2_norm() / b.l2_norm()
}

#[test]
fn duhamel_of_zero_is_zero() {
    let g = grid(8);
    let u = constant_trajectory(&random_field(g, 1, 1.0, 2.0, 1.0, true), 0.1, 4);
    let z = constant_trajectory(&VelocityField::zeros(g), 0.1, 4);
    let q = navier_stokes_coeffs();
    assert!(duhamel_b(&q, &u, &z, 0.07, 3).unwrap().is_zero());
}

#[test]
fn duhamel_constant_in_time_closed_form() {
    let g = grid(12);
    let q = navier_stokes_coeffs();
    let u = taylor_green(g, 1.0);
    let v = random_field(g, 2, 1.0, 2.5, 0.5, true);
    let qhat = apply_q(&q, &u, &v).unwrap();
    let (tu, tv) = (constant_trajectory(&u, 0.2, 8), constant_trajectory(&v, 0.2, 8));
    for t in [0.2, 0.125, 0.0613] {
        let b = duhamel_b(&q, &tu, &tv, t, 4).unwrap();
        let mut want = qhat.clone();
        for j in 0..3 {
            let c = want.component_mut(j).coeffs_mut();
            for (idx, z) in c.iter_mut().enumerate() {
                let k2 = g.k_squared(idx);
                *z *= if k2 == 0.0 { t } else { -(-t * k2).exp_m1() / k2 };
            }
        }
        assert!(b.max_abs_diff(&want) <= 1e-8, "t = {t}: {}", b.max_abs_diff(&want));
    }
}

#[test]
fn duhamel_symmetrized_sum_is_swap_invariant() {
    let g = grid(8);
    let q = navier_stokes_coeffs();
    let u = heat_trajectory(&random_field(g, 3, 1.0, 2.0, 1.0, true), 0.1, 5);
    let v = heat_trajectory(&random_field(g, 4, 1.0, 2.0, 1.0, true), 0.1, 5);
    let a = duhamel_b(&q, &u, &v, 0.1, 2).unwrap().add(&duhamel_b(&q, &v, &u, 0.1, 2).unwrap());
    let b = duhamel_b(&q, &v, &u, 0.1, 2).unwrap().add(&duhamel_b(&q, &u, &v, 0.1, 2).unwrap());
    assert!(a.max_abs_diff(&b) <= 1e-15 * a.max_abs().max(1.0));
}

#[test]
fn duhamel_rejects_out_of_range_and_mismatch() {
    let g = grid(8);
    let q = navier_stokes_coeffs();
    let u = constant_trajectory(&VelocityField::zeros(g), 0.1, 4);
    assert!(matches!(
        duhamel_b(&q, &u, &u, 0.2, 2),
        Err(MildError::TimeOutOfRange { .. })
    ));
    let w = constant_trajectory(&VelocityField::zeros(g), 0.1, 5);
    assert!(matches!(duhamel_b(&q, &u, &w, 0.05, 2), Err(MildError::GridMismatch)));
}

/// Interval-by-interval evaluation with the kernel `e^{(t-s)Δ}` applied
/// directly at every node, instead of the propagated running sum.
fn direct_duhamel(q: &QCoefficients, u: &Trajectory, t_eval_index: usize, order: usize) -> VelocityField {
    let (x, w) = gauss_legendre_unit(order);
    let t = u.times();
    let te = t[t_eval_index];
    let mut acc = VelocityField::zeros(*u.grid());
    for i in 0..t_eval_index {
        let h = t[i + 1] - t[i];
        for (&xq, &wq) in x.iter().zip(&w) {
            let s = t[i] + xq * h;
            let us = VelocityField::lin_comb(1.0 - xq, u.state(i), xq, u.state(i + 1));
            let qs = apply_q(q, &us, &us).unwrap();
            acc.axpy(h * wq, &heat_semigroup(&qs, te - s).unwrap());
        }
    }
    acc
}

#[test]
fn sweep_matches_direct_evaluation() {
    let g = grid(12);
    let q = navier_stokes_coeffs();
    let u = heat_trajectory(&random_field(g, 5, 1.0, 3.0, 1.0, true), 0.05, 6);
    let series = duhamel_series(&q, &u, &u, 3).unwrap();
    for i in [1, 3, 6] {
        let direct = direct_duhamel(&q, &u, i, 3);
        assert!(rel_max_diff(&series[i], &direct) < 1e-12);
        let single = duhamel_b(&q, &u, &u, u.times()[i], 3).unwrap();
        assert!(rel_max_diff(&single, &direct) < 1e-12);
    }
}

#[test]
fn quadrature_refinement_converges() {
    let g = grid(12);
    let q = navier_stokes_coeffs();
    let u = heat_trajectory(&random_field(g, 6, 1.0, 4.0, 1.0, true), 0.2, 4);
    let reference = duhamel_b(&q, &u, &u, 0.2, 12).unwrap();
    let err = |o: usize| duhamel_b(&q, &u, &u, 0.2, o).unwrap().sub(&reference).l2_norm();
    let (e1, e2) = (err(1), err(2));
    let order = (e1 / e2).log2();
    assert!(order >= 2.0, "observed order {order}");
}

fn zero_coeff_cfg(t_final: f64, n_times: usize) -> SolverConfig {
    SolverConfig {
        t_final,
        n_times,
        ..SolverConfig::default()
    }
}

#[test]
fn picard_trivial_cases() {
    let g = grid(8);
    let q = navier_stokes_coeffs();
    let (traj, rep) = picard_solve(&VelocityField::zeros(g), &q, &zero_coeff_cfg(0.01, 11)).unwrap();
    assert_eq!(rep.iterates, 1);
    assert!(rep.converged && traj.states().iter().all(|s| s.is_zero()));

    let u0 = random_field(g, 7, 1.0, 3.0, 1.0, true);
    let (traj, rep) = picard_solve(&u0, &QCoefficients::zeros(), &zero_coeff_cfg(0.01, 11)).unwrap();
    assert_eq!(rep.iterates, 2);
    assert!(rep.converged);
    for (t, s) in traj.times().iter().zip(traj.states()) {
        assert_eq!(*s, heat_semigroup(&u0, *t).unwrap());
    }
}

#[test]
fn picard_agrees_with_integrating_factor_oracle() {
    let g = grid(16);
    let q = navier_stokes_coeffs();
    let u0 = taylor_green(g, 1.0);
    let cfg = SolverConfig::default();
    let (traj, rep) = picard_solve(&u0, &q, &cfg).unwrap();
    assert!(rep.converged && rep.iterates <= 12, "{rep:?}");
    assert!(rep.residual <= 10.0 * cfg.tol);
    let etd = etd_integrate(&u0, &q, cfg.t_final, cfg.dt).unwrap();
    for (i, &t) in etd.times().iter().enumerate() {
        let j = traj.lattice_index(t).expect("shared time");
        if t > 0.0 {
            assert!(rel_l2(traj.state(j), etd.state(i)) <= 1e-6, "t = {t}");
        }
    }
    // geometric decay of the deltas once they are small
    let d = &rep.per_iterate_delta;
    for w in d.windows(2) {
        if w[0] < 1e-2 {
            assert!(w[1] < w[0]);
        }
    }
    for s in traj.states() {
        assert!(s.divergence_defect() <= 1e-9);
    }
}

#[test]
fn picard_reports_non_convergence() {
    let g = grid(8);
    let q = navier_stokes_coeffs();
    let u0 = random_field(g, 8, 1.0, 2.0, 40.0, true);
    let cfg = SolverConfig {
        t_final: 1.0,
        n_times: 11,
        max_iter: 8,
        dt: 0.1,
        ..SolverConfig::default()
    };
    match picard_solve(&u0, &q, &cfg) {
        Err(MildError::NonConvergence(rep)) => {
            assert!(!rep.converged);
            assert!(!rep.per_iterate_delta.is_empty());
        }
        other => panic!("expected non-convergence, got {:?}", other.map(|r| r.1)),
    }
}

#[test]
fn zero_mode_is_conserved() {
    let g = grid(8);
    let q = navier_stokes_coeffs();
    let mut u0 = random_field(g, 9, 1.0, 2.0, 0.5, true);
    u0.component_mut(0).set_mode([0, 0, 0], Complex64::new(0.3, 0.0));
    let (traj, _) = picard_solve(&u0, &q, &zero_coeff_cfg(0.02, 11)).unwrap();
    for s in traj.states() {
        assert!((s.component(0).mode([0, 0, 0]).re - 0.3).abs() < 1e-15);
        assert!(s.component(1).mode([0, 0, 0]).norm() < 1e-15);
    }
}

#[test]
fn integrating_factor_exact_for_linear_problem() {
    let g = grid(8);
    let u0 = random_field(g, 10, 1.0, 3.0, 1.0, true);
    let etd = etd_integrate(&u0, &QCoefficients::zeros(), 0.1, 0.01).unwrap();
    for (t, s) in etd.times().iter().zip(etd.states()) {
        assert!(rel_max_diff(s, &heat_semigroup(&u0, *t).unwrap()) < 1e-14);
    }
}

#[test]
fn integrating_factor_is_fourth_order() {
    let g = grid(16);
    let q = navier_stokes_coeffs();
    let u0 = taylor_green(g, 2.0);
    let end = |dt: f64| {
        let tr = etd_integrate(&u0, &q, 0.4, dt).unwrap();
        tr.state(tr.len() - 1).clone()
    };
    let (a, b, c) = (end(0.1), end(0.05), end(0.025));
    let order = (a.sub(&b).l2_norm() / b.sub(&c).l2_norm()).log2();
    assert!((3.5..=4.5).contains(&order), "observed order {order}");
}

#[test]
fn mild_residual_properties() {
    let g = grid(8);
    let u0 = random_field(g, 11, 1.0, 3.0, 1.0, true);
    let zero = QCoefficients::zeros();
    let heat = heat_trajectory(&u0, 0.05, 5);
    assert!(mild_residual(&heat, &u0, &zero, 1.0, 2)
        .unwrap()
        .iter()
        .all(|&r| r <= 1e-12));

    let q = navier_stokes_coeffs();
    let cfg = zero_coeff_cfg(0.01, 21);
    let (traj, rep) = picard_solve(&u0, &q, &cfg).unwrap();
    let res = mild_residual(&traj, &u0, &q, cfg.gamma, cfg.quad_order).unwrap();
    assert!(res.iter().all(|&r| r <= 10.0 * cfg.tol));
    assert_eq!(res, rep.residuals);

    // perturb one state: the residual there grows by about the perturbation
    let (times, mut states) = traj.into_parts();
    let mut bump = VelocityField::zeros(g);
    bump.component_mut(2).set_mode_pair([1, 1, 0], Complex64::new(1e-3, 0.0));
    let delta = bump.sobolev_norm(cfg.gamma, false).unwrap();
    states[10].axpy(1.0, &bump);
    let perturbed = Trajectory::new(times, states).unwrap();
    let res2 = mild_residual(&perturbed, &u0, &q, cfg.gamma, cfg.quad_order).unwrap();
    assert!((res2[10] - delta).abs() <= 0.05 * delta, "{} vs {delta}", res2[10]);
}

#[test]
fn graded_lattice_picard_converges() {
    let g = grid(12);
    let q = navier_stokes_coeffs();
    let u0 = random_field(g, 12, 1.0, 4.0, 0.5, true);
    let cfg = SolverConfig {
        lattice: TimeLattice::Graded {
            anchors: vec![1e-4, 1e-3],
            segment_steps: 5,
        },
        ..SolverConfig::default()
    };
    let (traj, rep) = picard_solve(&u0, &q, &cfg).unwrap();
    assert!(rep.converged);
    assert_eq!(traj.len(), 16);
    assert!(traj.lattice_index(1e-3).is_some());
}

#[test]
fn checkpoint_round_trip() {
    let g = grid(8);
    let u0 = random_field(g, 13, 1.0, 3.0, 1.0, true);
    let traj = heat_trajectory(&u0, 0.05, 3);
    let dir = tempfile::tempdir().unwrap();
    let path = write_trajectory(dir.path(), "traj", &traj, "abc").unwrap();
    let (back, manifest) = read_trajectory(&path).unwrap();
    assert_eq!(back, traj);
    assert_eq!(manifest.config_hash, "abc");
    assert_eq!(manifest.records, 12);
}
