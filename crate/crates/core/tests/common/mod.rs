#![allow(dead_code)]

use coupled_are::care::ReducedCare;
use coupled_are::matrix::{solve_linear, Mat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> Mat {
    let data = (0..rows * cols)
        .map(|_| rng.random_range(-scale..scale))
        .collect();
    Mat::from_vec(rows, cols, data).unwrap()
}

/// `L·Lᵀ + shift·I`
pub fn spd(rng: &mut ChaCha8Rng, n: usize, shift: f64) -> Mat {
    let l = uniform(rng, n, n, 1.0);
    &(&l * &l.transpose()) + &Mat::identity(n).scale(shift)
}

/// Random CARE with positive definite `Q − SᵀR⁻¹S`, so a stabilizing
/// solution exists whenever `(A, B)` is stabilizable (generic for random B).
pub fn random_care(rng: &mut ChaCha8Rng, n: usize, m: usize, cross: bool) -> ReducedCare {
    let a = uniform(rng, n, n, 1.5);
    let b = uniform(rng, n, m, 1.0);
    let r = spd(rng, m, 0.5);
    let s = if cross {
        uniform(rng, m, n, 1.0)
    } else {
        Mat::zeros(m, n)
    };
    let q0 = spd(rng, n, 0.1);
    let rinv_s = solve_linear(&r, &s).unwrap();
    let q = coupled_are::matrix::symmetrize(&(&q0 + &(&s.transpose() * &rinv_s)));
    ReducedCare::new(a, b, q, r, s).unwrap()
}

/// Stable matrix: random matrix shifted left of its Gershgorin discs.
pub fn hurwitz(rng: &mut ChaCha8Rng, n: usize) -> Mat {
    let m = uniform(rng, n, n, 1.0);
    let shift = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    &m - &Mat::identity(n).scale(shift + 0.1)
}
