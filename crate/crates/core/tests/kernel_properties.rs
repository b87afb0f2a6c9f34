mod common;

use coupled_are::matrix::{
    frobenius_sq, kron, solve_linear, spectrum, symmetrize, unvec, vec, Mat,
};
use nalgebra::{Complex, DMatrix};
use proptest::prelude::*;

fn well_conditioned(n: usize, entries: Vec<f64>) -> Mat {
    let m = Mat::from_vec(n, n, entries).unwrap();
    &m + &Mat::identity(n).scale(n as f64 + 1.0)
}

proptest! {
    #[test]
    fn solve_linear_backward_error(
        (n, entries, rhs) in (1usize..=8).prop_flat_map(|n| (
            Just(n),
            proptest::collection::vec(-1.0f64..1.0, n * n),
            proptest::collection::vec(-10.0f64..10.0, n * 3),
        ))
    ) {
        let m = well_conditioned(n, entries);
        let rhs = Mat::from_vec(n, 3, rhs).unwrap();
        let y = solve_linear(&m, &rhs).unwrap();
        let err = (&(&m * &y) - &rhs).frobenius_norm();
        prop_assert!(err <= 1e-10 * (1.0 + rhs.frobenius_norm()), "err {err:e}");
    }

    #[test]
    fn frobenius_transpose_invariant(
        (r, c, entries) in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| (
            Just(r), Just(c), proptest::collection::vec(-1e3f64..1e3, r * c)
        ))
    ) {
        let m = Mat::from_vec(r, c, entries).unwrap();
        prop_assert_eq!(frobenius_sq(&m), frobenius_sq(&m.transpose()));
    }
}

#[test]
fn spectrum_backward_error() {
    let mut rng = common::rng(7);
    for trial in 0..50 {
        let n = 1 + trial % 8;
        let m = common::uniform(&mut rng, n, n, 2.0);
        let spec = spectrum(&m).unwrap();
        assert_eq!(spec.eigenvalues.len(), n);
        let cm: DMatrix<Complex<f64>> = m.to_nalgebra().map(|x| Complex::new(x, 0.0));
        for &lam in &spec.eigenvalues {
            // smallest singular value of M − λI bounds ‖Mv − λv‖ over unit v
            let shifted = &cm - DMatrix::<Complex<f64>>::identity(n, n) * lam;
            let smin = shifted.singular_values().min();
            assert!(smin <= 1e-9 * m.frobenius_norm(), "trial {trial}: {smin:e}");
            // conjugate partner present
            assert!(spec
                .eigenvalues
                .iter()
                .any(|z| (z - lam.conj()).norm() <= 1e-9 * (1.0 + lam.norm())));
        }
    }
}

#[test]
fn symmetric_spectrum_is_real() {
    let mut rng = common::rng(11);
    for n in 1..=8 {
        let s = symmetrize(&common::uniform(&mut rng, n, n, 3.0));
        for z in spectrum(&s).unwrap().eigenvalues {
            assert!(z.im.abs() <= 1e-9);
        }
    }
}

#[test]
fn kron_vec_identity() {
    let mut rng = common::rng(3);
    for _ in 0..100 {
        let a = common::uniform(&mut rng, 3, 3, 1.0);
        let x = common::uniform(&mut rng, 3, 3, 1.0);
        let b = common::uniform(&mut rng, 3, 3, 1.0);
        let lhs = vec(&(&(&a * &x) * &b));
        let rhs = &kron(&b.transpose(), &a) * &vec(&x);
        assert!((&lhs - &rhs).max_abs() < 1e-12);
        assert_eq!(unvec(&vec(&x), 3, 3).unwrap(), x);
    }
}
