//! Independent checks of candidate solutions.
//!
//! [`coupled_residual`] evaluates the coupled equations directly from the
//! problem data, without going through the per-player reductions used by
//! the solver. [`scalar_oracle`] enumerates every real solution of a scalar
//! (`n = m1 = m2 = 1`) problem by substituting the gain condition and
//! root-finding the resulting pair of bivariate quadratics.

use crate::error::{Error, Result};
use crate::matrix::{is_hurwitz, is_psd, solve_linear, Mat, HURWITZ_MARGIN};
use crate::problem::{GainPair, ProblemSpec, ValuePair};

/// Tolerance for the definiteness and stability flags of a solution.
pub const SOLUTION_FLAG_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    /// Frobenius norm of player 1's Riccati equation.
    pub res1: f64,
    pub res2: f64,
    /// Frobenius norm of the joint gain condition.
    pub res_gain: f64,
    pub psd1: bool,
    pub psd2: bool,
    /// `A + B1·Θ1 + B2·Θ2` is Hurwitz.
    pub closed_loop_ok: bool,
}

impl ResidualReport {
    pub fn max_residual(&self) -> f64 {
        self.res1.max(self.res2).max(self.res_gain)
    }
}

fn check_shapes(spec: &ProblemSpec, vp: &ValuePair, gp: &GainPair) -> Result<()> {
    let d = spec.dims();
    let want = [
        ("X1", vp.x1.shape(), (d.n, d.n)),
        ("X2", vp.x2.shape(), (d.n, d.n)),
        ("Theta1", gp.theta1.shape(), (d.m1, d.n)),
        ("Theta2", gp.theta2.shape(), (d.m2, d.n)),
    ];
    for (name, got, shape) in want {
        if got != shape {
            return Err(Error::Dim(format!(
                "{name} is {}x{}, expected {}x{}",
                got.0, got.1, shape.0, shape.1
            )));
        }
    }
    Ok(())
}

/// `Xi·A + Aᵀ·Xi + Θᵀ·Ri·Θ + Xi·B·Θ + Θᵀ·Bᵀ·Xi + Qi`
fn riccati_lhs(spec: &ProblemSpec, x: &Mat, q: &Mat, r: &Mat, theta: &Mat, b: &Mat) -> Mat {
    let xbt = &(x * b) * theta;
    let quad = &(&theta.transpose() * r) * theta;
    let lin = &(x * spec.a()) + &(&spec.a().transpose() * x);
    &(&(&lin + &quad) + &(&xbt + &xbt.transpose())) + q
}

/// Residual norms `(res1, res2, res_gain)` only.
pub fn residual_norms(
    spec: &ProblemSpec,
    vp: &ValuePair,
    gp: &GainPair,
) -> Result<(f64, f64, f64)> {
    check_shapes(spec, vp, gp)?;
    let theta = gp.stacked();
    let b = spec.b();
    let res1 = riccati_lhs(spec, &vp.x1, spec.q1(), spec.r1(), &theta, &b).frobenius_norm();
    let res2 = riccati_lhs(spec, &vp.x2, spec.q2(), spec.r2(), &theta, &b).frobenius_norm();
    let lhs = (&spec.b1().transpose() * &vp.x1).vstack(&(&spec.b2().transpose() * &vp.x2));
    let res_gain = (&lhs + &(&spec.coupling_matrix() * &theta)).frobenius_norm();
    Ok((res1, res2, res_gain))
}

pub fn coupled_residual(
    spec: &ProblemSpec,
    vp: &ValuePair,
    gp: &GainPair,
) -> Result<ResidualReport> {
    let (res1, res2, res_gain) = residual_norms(spec, vp, gp)?;
    let closed = &(spec.a() + &(spec.b1() * &gp.theta1)) + &(spec.b2() * &gp.theta2);
    Ok(ResidualReport {
        res1,
        res2,
        res_gain,
        psd1: is_psd(&vp.x1, SOLUTION_FLAG_TOL).unwrap_or(false),
        psd2: is_psd(&vp.x2, SOLUTION_FLAG_TOL).unwrap_or(false),
        closed_loop_ok: is_hurwitz(&closed, HURWITZ_MARGIN).unwrap_or(false),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub pass: bool,
    pub gains: GainPair,
    pub report: ResidualReport,
}

/// Passes iff every residual is at most `tol` and both values are PSD.
///
/// When `gains` is absent they are solved from the joint gain condition.
pub fn verify_solution(
    spec: &ProblemSpec,
    values: &ValuePair,
    gains: Option<&GainPair>,
    tol: f64,
) -> Result<Verdict> {
    let gains = match gains {
        Some(g) => g.clone(),
        None => crate::coupled::gains_from_values(spec, values)?,
    };
    let report = coupled_residual(spec, values, &gains)?;
    let pass = report.max_residual() <= tol && report.psd1 && report.psd2;
    Ok(Verdict {
        pass,
        gains,
        report,
    })
}

/// Search box and grid of [`scalar_oracle`].
pub const ORACLE_BOX: f64 = 50.0;
pub const ORACLE_STEP: f64 = 0.05;
const ORACLE_DEDUP: f64 = 1e-6;
const ORACLE_ACCEPT: f64 = 1e-10;

/// Scalar problem with the gain condition substituted:
/// `θ = C·x`, `C = −M⁻¹·diag(b1, b2)`, and
/// `fi(x) = 2a·xi + θᵀRiθ + 2·xi·(b1θ1 + b2θ2) + qi`.
#[derive(Debug, Clone)]
pub struct ScalarSystem {
    a: f64,
    b: [f64; 2],
    q: [f64; 2],
    r: [[[f64; 2]; 2]; 2],
    c: [[f64; 2]; 2],
}

impl ScalarSystem {
    pub fn new(spec: &ProblemSpec) -> Result<Self> {
        let d = spec.dims();
        if (d.n, d.m1, d.m2) != (1, 1, 1) {
            return Err(Error::Dim("scalar oracle needs n = m1 = m2 = 1".into()));
        }
        let mm = spec.coupling_matrix();
        let (b1, b2) = (spec.b1()[(0, 0)], spec.b2()[(0, 0)]);
        let minv = solve_linear(&mm, &Mat::identity(2)).map_err(|_| Error::CouplingSingular)?;
        let c = [
            [-minv[(0, 0)] * b1, -minv[(0, 1)] * b2],
            [-minv[(1, 0)] * b1, -minv[(1, 1)] * b2],
        ];
        let r = |m: &Mat| [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]];
        Ok(ScalarSystem {
            a: spec.a()[(0, 0)],
            b: [b1, b2],
            q: [spec.q1()[(0, 0)], spec.q2()[(0, 0)]],
            r: [r(spec.r1()), r(spec.r2())],
            c,
        })
    }

    fn theta(&self, x: [f64; 2]) -> [f64; 2] {
        [
            self.c[0][0] * x[0] + self.c[0][1] * x[1],
            self.c[1][0] * x[0] + self.c[1][1] * x[1],
        ]
    }

    pub fn eval(&self, x: [f64; 2]) -> [f64; 2] {
        let t = self.theta(x);
        let drive = self.b[0] * t[0] + self.b[1] * t[1];
        let mut f = [0.0; 2];
        for i in 0..2 {
            let r = &self.r[i];
            let quad =
                t[0] * (r[0][0] * t[0] + r[0][1] * t[1]) + t[1] * (r[1][0] * t[0] + r[1][1] * t[1]);
            f[i] = 2.0 * self.a * x[i] + quad + 2.0 * x[i] * drive + self.q[i];
        }
        f
    }

    fn jacobian(&self, x: [f64; 2]) -> [[f64; 2]; 2] {
        let t = self.theta(x);
        let drive = self.b[0] * t[0] + self.b[1] * t[1];
        let mut jac = [[0.0; 2]; 2];
        for i in 0..2 {
            let r = &self.r[i];
            // ∇θ(θᵀRθ) = (R + Rᵀ)θ
            let g = [
                (r[0][0] + r[0][0]) * t[0] + (r[0][1] + r[1][0]) * t[1],
                (r[1][0] + r[0][1]) * t[0] + (r[1][1] + r[1][1]) * t[1],
            ];
            for j in 0..2 {
                let dtheta = [self.c[0][j], self.c[1][j]];
                let ddrive = self.b[0] * dtheta[0] + self.b[1] * dtheta[1];
                let dquad = g[0] * dtheta[0] + g[1] * dtheta[1];
                let delta = if i == j { 1.0 } else { 0.0 };
                jac[i][j] =
                    2.0 * self.a * delta + dquad + 2.0 * delta * drive + 2.0 * x[i] * ddrive;
            }
        }
        jac
    }

    /// Newton's method from `x`; `None` if it fails to settle on a root.
    pub fn polish(&self, mut x: [f64; 2]) -> Option<[f64; 2]> {
        for _ in 0..100 {
            let f = self.eval(x);
            let j = self.jacobian(x);
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det == 0.0 || !det.is_finite() {
                break;
            }
            let dx = [
                (j[1][1] * f[0] - j[0][1] * f[1]) / det,
                (-j[1][0] * f[0] + j[0][0] * f[1]) / det,
            ];
            x = [x[0] - dx[0], x[1] - dx[1]];
            if dx[0].abs().max(dx[1].abs()) <= 1e-12 * (1.0 + x[0].abs().max(x[1].abs())) {
                break;
            }
        }
        let f = self.eval(x);
        (f[0].abs().max(f[1].abs()) <= ORACLE_ACCEPT && x.iter().all(|v| v.is_finite()))
            .then_some(x)
    }
}

fn sign_change(v: [f64; 4]) -> bool {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    lo <= 0.0 && hi >= 0.0
}

/// All real solution pairs `(X1, X2)` of a scalar problem inside the box
/// `[-ORACLE_BOX, ORACLE_BOX]²`, sorted lexicographically.
///
/// Scans a grid of spacing [`ORACLE_STEP`], seeds Newton from every cell in
/// which both equations change sign, and merges roots closer than 1e-6.
/// Roots where both curves touch without crossing inside one cell can be
/// missed.
pub fn scalar_oracle(spec: &ProblemSpec) -> Result<Vec<(f64, f64)>> {
    let sys = ScalarSystem::new(spec)?;
    let steps = (2.0 * ORACLE_BOX / ORACLE_STEP).round() as usize;
    let coord = |k: usize| -ORACLE_BOX + k as f64 * ORACLE_STEP;
    let row = |i: usize| -> Vec<[f64; 2]> {
        (0..=steps)
            .map(|j| sys.eval([coord(i), coord(j)]))
            .collect()
    };

    let mut roots: Vec<[f64; 2]> = Vec::new();
    let mut lower = row(0);
    for i in 0..steps {
        let upper = row(i + 1);
        for j in 0..steps {
            let corners = [lower[j], lower[j + 1], upper[j], upper[j + 1]];
            if sign_change(corners.map(|f| f[0])) && sign_change(corners.map(|f| f[1])) {
                let seed = [coord(i) + 0.5 * ORACLE_STEP, coord(j) + 0.5 * ORACLE_STEP];
                if let Some(x) = sys.polish(seed) {
                    let inside = x.iter().all(|v| v.abs() <= ORACLE_BOX + ORACLE_STEP);
                    let dup = roots.iter().any(|r| {
                        (r[0] - x[0]).abs() <= ORACLE_DEDUP && (r[1] - x[1]).abs() <= ORACLE_DEDUP
                    });
                    if inside && !dup {
                        roots.push(x);
                    }
                }
            }
        }
        lower = upper;
    }
    let mut out: Vec<(f64, f64)> = roots.into_iter().map(|r| (r[0], r[1])).collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(out)
}
