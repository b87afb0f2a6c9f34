//! Solver for the coupled algebraic Riccati equations of two-player
//! closed-loop Nash linear-quadratic differential games.
//!
//! The coupled system is
//!
//! ```text
//! Xi·A + Aᵀ·Xi + Θᵀ·Ri·Θ + Xi·B·Θ + Θᵀ·Bᵀ·Xi + Qi = 0,   i = 1, 2
//! [B1ᵀ·X1; B2ᵀ·X2] + M·Θ = 0,   M = [[R1_11, R1_12], [R2_21, R2_22]]
//! ```
//!
//! with `B = [B1 B2]` and `Θ = [Θ1; Θ2]`. [`coupled::solve_coupled`]
//! alternates between the two players: it freezes the opponent's gain,
//! solves the resulting single-player Riccati equation for its stabilizing
//! solution ([`care::solve_care`]) and updates the player's gain, until
//! consecutive iterates stop moving. [`verify`] re-evaluates the coupled
//! equations directly and carries a brute-force root finder for scalar
//! problems.

pub mod care;
pub mod coupled;
pub mod error;
pub mod format;
pub mod matrix;
pub mod problem;
pub mod verify;

pub use care::{CareSolution, ReducedCare};
pub use coupled::{solve_coupled, IterationConfig, SolveReport, Status, TraceEntry};
pub use error::{Error, Result};
pub use matrix::Mat;
pub use problem::{builtin_example, validate, Dims, GainPair, ProblemSpec, ValuePair};
pub use verify::{coupled_residual, ResidualReport};
