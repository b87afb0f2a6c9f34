//! Alternating (Gauss–Seidel) iteration for the coupled Riccati system.
//!
//! Starting from `X1 = X2 = init_scale·I`, each sweep
//!
//! 1. solves the joint gain condition for `(Θ1, Θ2)` at the current values,
//! 2. freezes `Θ2`, solves player 1's reduced Riccati equation and updates `Θ1`,
//! 3. freezes the fresh `Θ1`, solves player 2's reduced equation and updates `Θ2`.
//!
//! The loop stops once `‖X̂1 − X1‖²_F + ‖X̂2 − X2‖²_F < epsilon`.

use crate::care::{solve_care, ReducedCare};
use crate::error::{Error, Result};
use crate::matrix::{frobenius_sq, solve_linear, symmetrize, Mat};
use crate::problem::{validate, GainPair, ProblemSpec, ValuePair};
use crate::verify::{coupled_residual, residual_norms, ResidualReport};

#[derive(Debug, Clone, PartialEq)]
pub struct IterationConfig {
    /// Initial iterate is `init_scale·(I, I)`.
    pub init_scale: f64,
    /// Threshold on the squared Frobenius step.
    pub epsilon: f64,
    pub max_iter: usize,
    /// Newton polishing of each reduced Riccati solve.
    pub care_refine: bool,
    pub record_trace: bool,
}

impl Default for IterationConfig {
    fn default() -> Self {
        IterationConfig {
            init_scale: 0.5,
            epsilon: 1e-3,
            max_iter: 500,
            care_refine: true,
            record_trace: true,
        }
    }
}

impl IterationConfig {
    pub fn check(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::Config(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        if !self.init_scale.is_finite() {
            return Err(Error::Config("init_scale must be finite".into()));
        }
        Ok(())
    }
}

/// One row of the iteration history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub iter: usize,
    pub dx1_sq: f64,
    pub dx2_sq: f64,
    /// `dx1_sq + dx2_sq`, the quantity compared against `epsilon`.
    pub step_sq: f64,
    /// Coupled residuals at the new iterate, evaluated with the sweep's
    /// staggered gains; `res_gain` therefore measures how far the two
    /// players' gains are from satisfying the joint gain condition.
    pub res1: f64,
    pub res2: f64,
    pub res_gain: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Converged,
    MaxIter,
    Error(Error),
}

impl Status {
    pub fn label(&self) -> String {
        match self {
            Status::Converged => "Converged".into(),
            Status::MaxIter => "MaxIter".into(),
            Status::Error(e) => format!("Error({})", e.code()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    /// Last accepted iterate (the initial one if the first sweep failed).
    pub values: ValuePair,
    /// Gains solved jointly from `values`; empty on early failure.
    pub gains: Option<GainPair>,
    pub iterations: usize,
    pub trace: Vec<TraceEntry>,
    pub status: Status,
    /// Coupled residuals of `(values, gains)`.
    pub residuals: Option<ResidualReport>,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.status == Status::Converged
    }
}

pub fn init_iterate(cfg: &IterationConfig, n: usize) -> ValuePair {
    let x = Mat::identity(n).scale(cfg.init_scale);
    ValuePair {
        x1: x.clone(),
        x2: x,
    }
}

/// Solves the joint gain condition `M·Θ = −[B1ᵀX1; B2ᵀX2]`.
pub fn gains_from_values(spec: &ProblemSpec, vp: &ValuePair) -> Result<GainPair> {
    let d = spec.dims();
    if vp.x1.shape() != (d.n, d.n) || vp.x2.shape() != (d.n, d.n) {
        return Err(Error::Dim(format!("value matrices must be {0}x{0}", d.n)));
    }
    let rhs = (&spec.b1().transpose() * &vp.x1).vstack(&(&spec.b2().transpose() * &vp.x2));
    let theta = solve_linear(&spec.coupling_matrix(), &(-&rhs)).map_err(|e| match e {
        Error::Singular(_) => Error::CouplingSingular,
        other => other,
    })?;
    Ok(GainPair::from_stacked(&theta, d.m1))
}

/// Player 1's equation with `Θ2` frozen:
/// `𝒜1 = A + B2·Θ2`, `𝒬1 = Q1 + Θ2ᵀ·R1_22·Θ2`, `𝒮1 = R1_12·Θ2`.
pub fn reduce_player1(spec: &ProblemSpec, theta2: &Mat) -> Result<ReducedCare> {
    let rb = spec.r1_blocks();
    ReducedCare::new(
        spec.a() + &(spec.b2() * theta2),
        spec.b1().clone(),
        symmetrize(&(spec.q1() + &(&(&theta2.transpose() * &rb.r22) * theta2))),
        rb.r11,
        &rb.r12 * theta2,
    )
}

/// Player 2's equation with `Θ1` frozen:
/// `𝒜2 = A + B1·Θ1`, `𝒬2 = Q2 + Θ1ᵀ·R2_11·Θ1`, `𝒮2 = R2_21·Θ1`.
pub fn reduce_player2(spec: &ProblemSpec, theta1: &Mat) -> Result<ReducedCare> {
    let rb = spec.r2_blocks();
    ReducedCare::new(
        spec.a() + &(spec.b1() * theta1),
        spec.b2().clone(),
        symmetrize(&(spec.q2() + &(&(&theta1.transpose() * &rb.r11) * theta1))),
        rb.r22,
        &rb.r21 * theta1,
    )
}

/// `Θ = −R⁻¹·(Bᵀ·X + 𝒮)`
pub fn gain_from_care(rc: &ReducedCare, x: &Mat) -> Result<Mat> {
    Ok(-&rc.feedback(x)?)
}

/// One pass: joint gains, then player 1, then player 2 (using the fresh Θ1).
pub fn sweep(
    spec: &ProblemSpec,
    vp: &ValuePair,
    cfg: &IterationConfig,
) -> Result<(ValuePair, GainPair)> {
    let start = gains_from_values(spec, vp)?;

    let rc1 = reduce_player1(spec, &start.theta2)?;
    let x1 = solve_care(&rc1, cfg.care_refine)?.x;
    let theta1 = gain_from_care(&rc1, &x1)?;

    let rc2 = reduce_player2(spec, &theta1)?;
    let x2 = solve_care(&rc2, cfg.care_refine)?.x;
    let theta2 = gain_from_care(&rc2, &x2)?;

    Ok((ValuePair { x1, x2 }, GainPair { theta1, theta2 }))
}

/// Runs the alternating iteration to completion. Errors never escape; they
/// end up in [`SolveReport::status`].
pub fn solve_coupled(spec: &ProblemSpec, cfg: &IterationConfig) -> SolveReport {
    let n = spec.dims().n;
    let mut report = SolveReport {
        values: init_iterate(cfg, n),
        gains: None,
        iterations: 0,
        trace: Vec::new(),
        status: Status::MaxIter,
        residuals: None,
    };
    if let Err(e) = cfg.check().and_then(|_| validate(spec).map(|_| ())) {
        report.status = Status::Error(e);
        return report;
    }

    let mut current = report.values.clone();
    for iter in 1..=cfg.max_iter {
        let (next, staggered) = match sweep(spec, &current, cfg) {
            Ok(v) => v,
            Err(e) => {
                report.status = Status::Error(e);
                break;
            }
        };
        report.iterations = iter;
        let dx1_sq = frobenius_sq(&(&current.x1 - &next.x1));
        let dx2_sq = frobenius_sq(&(&current.x2 - &next.x2));
        let step_sq = dx1_sq + dx2_sq;
        if cfg.record_trace {
            let (res1, res2, res_gain) =
                residual_norms(spec, &next, &staggered).unwrap_or((f64::NAN, f64::NAN, f64::NAN));
            report.trace.push(TraceEntry {
                iter,
                dx1_sq,
                dx2_sq,
                step_sq,
                res1,
                res2,
                res_gain,
            });
        }
        current = next;
        if !step_sq.is_finite() {
            report.status =
                Status::Error(Error::NoConvergence("iterates became non-finite".into()));
            break;
        }
        if step_sq < cfg.epsilon {
            report.status = Status::Converged;
            break;
        }
    }
    report.values = current;

    match gains_from_values(spec, &report.values) {
        Ok(g) => {
            report.residuals = coupled_residual(spec, &report.values, &g).ok();
            report.gains = Some(g);
        }
        Err(e) => {
            if !matches!(report.status, Status::Error(_)) {
                report.status = Status::Error(e);
            }
        }
    }
    report
}
