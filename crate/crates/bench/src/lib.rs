//! Deterministic inputs for the benchmarks.

use coupled_are::care::ReducedCare;
use coupled_are::matrix::{solve_linear, symmetrize};
use coupled_are::Mat;

/// Entries in `[-1, 1)` from a sine hash; unlike a plain sine sequence the
/// result has full rank.
fn wave(rows: usize, cols: usize, phase: f64) -> Mat {
    let data = (0..rows * cols)
        .map(|k| {
            let h = ((k as f64 + phase) * 12.9898).sin() * 43758.5453;
            2.0 * (h - h.floor()) - 1.0
        })
        .collect();
    Mat::from_vec(rows, cols, data).unwrap()
}

/// A well-posed `n`-state CARE with `m` inputs and a cross term.
pub fn care_fixture(n: usize, m: usize) -> ReducedCare {
    let a = wave(n, n, 0.3);
    let b = wave(n, m, 1.1);
    let l = wave(m, m, 2.0);
    let r = &(&l * &l.transpose()) + &Mat::identity(m);
    let s = wave(m, n, 0.7).scale(0.5);
    let c = wave(n, n, 2.9);
    let q0 = &(&c * &c.transpose()) + &Mat::identity(n).scale(0.1);
    let q = symmetrize(&(&q0 + &(&s.transpose() * &solve_linear(&r, &s).unwrap())));
    ReducedCare::new(a, b, q, r, s).unwrap()
}

/// Stable `n × n` matrix and a positive definite right-hand side.
pub fn lyapunov_fixture(n: usize) -> (Mat, Mat) {
    let acl = &wave(n, n, 0.5) - &Mat::identity(n).scale(n as f64 + 0.5);
    let c = wave(n, n, 1.3);
    (acl, &(&c * &c.transpose()) + &Mat::identity(n))
}
