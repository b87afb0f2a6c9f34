mod common;

use coupled_are::care::{
    build_hamiltonian, eliminate_cross_term, kleinman_refine, solve_care, solve_lyapunov,
    stable_subspace, ReducedCare, REFINE_TOL,
};
use coupled_are::matrix::{inverse, is_hurwitz, spectrum, Mat, HURWITZ_MARGIN};

fn independent_residual(rc: &ReducedCare, x: &Mat) -> f64 {
    let rinv = inverse(&rc.r).unwrap();
    let left = &(x * &rc.b) + &rc.s.transpose();
    let right = &(&rc.b.transpose() * x) + &rc.s;
    let lin = &(&(x * &rc.a) + &(&rc.a.transpose() * x)) + &rc.q;
    (&lin - &(&(&left * &rinv) * &right)).frobenius_norm()
}

#[test]
fn random_instances_satisfy_contract() {
    let mut rng = common::rng(2024);
    for trial in 0..200 {
        let n = 1 + trial % 3;
        let m = 1 + (trial / 3) % 2;
        let rc = common::random_care(&mut rng, n, m, trial % 2 == 1);
        let sol = solve_care(&rc, true).unwrap_or_else(|e| panic!("trial {trial}: {e}"));
        assert!(sol.x.asymmetry() <= 1e-10);
        assert!(is_hurwitz(&sol.closed_loop, HURWITZ_MARGIN).unwrap());
        let scale = (1.0 + sol.x.frobenius_norm()).powi(2);
        assert!(
            sol.residual <= 1e-9 * scale,
            "trial {trial}: {:e}",
            sol.residual
        );
        assert!((sol.residual - independent_residual(&rc, &sol.x)).abs() <= 1e-12 * scale);
    }
}

#[test]
fn unrefined_solutions_meet_contract() {
    let mut rng = common::rng(99);
    for trial in 0..60 {
        let rc = common::random_care(&mut rng, 1 + trial % 3, 1, trial % 2 == 0);
        let sol = solve_care(&rc, false).unwrap();
        assert_eq!(sol.refine_steps, 0);
        assert!(sol.residual <= 1e-9 * (1.0 + sol.x.frobenius_norm()).powi(2));
    }
}

#[test]
fn hamiltonian_spectrum_is_paired() {
    let mut rng = common::rng(5);
    for trial in 0..50 {
        let n = 1 + trial % 4;
        let rc = common::random_care(&mut rng, n, 1 + trial % 2, trial % 3 == 0);
        let e = eliminate_cross_term(&rc).unwrap();
        let h = build_hamiltonian(&e.a_hat, &e.g, &e.q_hat);
        let eig = spectrum(&h).unwrap().eigenvalues;
        for &lam in &eig {
            assert!(
                eig.iter()
                    .any(|z| (z + lam).norm() <= 1e-8 * (1.0 + lam.norm())),
                "trial {trial}: {lam} has no mirror"
            );
        }
    }
}

#[test]
fn stable_subspace_is_invariant() {
    let mut rng = common::rng(17);
    for trial in 0..40 {
        let n = 1 + trial % 4;
        let rc = common::random_care(&mut rng, n, 2, trial % 2 == 0);
        let e = eliminate_cross_term(&rc).unwrap();
        let h = build_hamiltonian(&e.a_hat, &e.g, &e.q_hat);
        let (u1, u2) = stable_subspace(&h).unwrap();
        let u = u1.vstack(&u2);
        let w = &(&u.transpose() * &h) * &u;
        assert!((&(&h * &u) - &(&u * &w)).frobenius_norm() <= 1e-8);
        assert!(is_hurwitz(&w, 0.0).unwrap());
    }
}

#[test]
fn subspace_and_newton_routes_agree() {
    let mut rng = common::rng(31);
    for trial in 0..60 {
        let n = 1 + trial % 3;
        let rc = common::random_care(&mut rng, n, 1 + trial % 2, false);
        let direct = solve_care(&rc, false).unwrap();
        let start = &direct.x + &Mat::identity(n).scale(0.5);
        if !is_hurwitz(&rc.closed_loop(&start).unwrap(), HURWITZ_MARGIN).unwrap() {
            continue;
        }
        let newton = kleinman_refine(&rc, &start).unwrap();
        let gap = (&direct.x - &newton.x).frobenius_norm();
        assert!(
            gap <= 1e-8 * (1.0 + direct.x.frobenius_norm()),
            "trial {trial}: {gap:e}"
        );
    }
}

#[test]
fn scalar_matches_closed_form() {
    let mut rng = common::rng(8);
    for _ in 0..100 {
        let rc = common::random_care(&mut rng, 1, 1, true);
        let e = eliminate_cross_term(&rc).unwrap();
        let (a, g, q) = (e.a_hat[(0, 0)], e.g[(0, 0)], e.q_hat[(0, 0)]);
        // g·x² − 2a·x − q = 0, stabilizing root makes a − g·x < 0
        let root = (a + (a * a + g * q).sqrt()) / g;
        let sol = solve_care(&rc, true).unwrap();
        assert!((sol.x[(0, 0)] - root).abs() <= 1e-10 * (1.0 + root.abs()));
    }
}

#[test]
fn lyapunov_residuals() {
    let mut rng = common::rng(77);
    for trial in 0..100 {
        let n = 1 + trial % 5;
        let acl = common::hurwitz(&mut rng, n);
        let w = common::spd(&mut rng, n, 0.0);
        let x = solve_lyapunov(&acl, &w).unwrap();
        let res = (&(&(&acl.transpose() * &x) + &(&x * &acl)) + &w).frobenius_norm();
        assert!(
            res <= 1e-10 * (1.0 + w.frobenius_norm()),
            "trial {trial}: {res:e}"
        );
        assert_eq!(x.asymmetry(), 0.0);
    }
}

#[test]
fn newton_residual_decreases_from_far_start() {
    let rc = common::random_care(&mut common::rng(1), 3, 2, true);
    let exact = solve_care(&rc, true).unwrap();
    let far = [10.0, 5.0, 2.0, 1.0]
        .iter()
        .map(|&c| &exact.x + &Mat::identity(3).scale(c))
        .find(|x| is_hurwitz(&rc.closed_loop(x).unwrap(), HURWITZ_MARGIN).unwrap())
        .unwrap();
    let sol = kleinman_refine(&rc, &far).unwrap();
    assert!(sol.refine_steps > 1);
    assert!(sol.residual <= REFINE_TOL * (1.0 + sol.x.frobenius_norm()).powi(2) * 10.0);
    assert!((&sol.x - &exact.x).frobenius_norm() < 1e-9);
}
