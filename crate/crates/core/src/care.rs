//! Single-player continuous-time algebraic Riccati equation with cross term
//!
//! ```text
//! X·A + Aᵀ·X + Q − (X·B + Sᵀ)·R⁻¹·(Bᵀ·X + S) = 0
//! ```
//!
//! The stabilizing solution is taken from the stable invariant subspace of
//! the associated Hamiltonian matrix and then polished with Newton–Kleinman
//! steps, each of which is a Lyapunov solve at the current closed loop.
//!
//! The stable subspace is computed from the matrix sign function: for a
//! matrix with no eigenvalues on the imaginary axis, `(I − sign(H)) / 2` is
//! the spectral projector onto the stable subspace, and a column-pivoted QR
//! of that projector yields an orthonormal basis. Repeated eigenvalues need
//! no special handling on this route.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::{
    frobenius_sq, is_hurwitz, is_pd, kron, solve_linear, spectrum, symmetrize, unvec, vec, Lu, Mat,
    HURWITZ_MARGIN,
};

/// Eigenvalues with `|Re λ|` below this are treated as lying on the imaginary axis.
pub const IMAG_AXIS_MARGIN: f64 = 1e-9;
/// Newton polishing stops once the residual is below `REFINE_TOL·(1+‖X‖_F)²`.
pub const REFINE_TOL: f64 = 1e-11;
pub const MAX_REFINE_STEPS: usize = 20;

const SIGN_MAX_ITER: usize = 100;
const SIGN_TOL: f64 = 1e-10;
const QSYM_TOL: f64 = 1e-10;

/// One player's decoupled Riccati equation.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedCare {
    /// Drift `𝒜` (n×n).
    pub a: Mat,
    /// Input matrix (n×m).
    pub b: Mat,
    /// State weight `𝒬` (n×n, symmetric).
    pub q: Mat,
    /// Control weight block (m×m, symmetric positive definite).
    pub r: Mat,
    /// Cross term `𝒮` (m×n).
    pub s: Mat,
}

impl ReducedCare {
    pub fn new(a: Mat, b: Mat, q: Mat, r: Mat, s: Mat) -> Result<Self> {
        let n = a.rows();
        let m = b.cols();
        for (name, mat, shape) in [
            ("A", &a, (n, n)),
            ("B", &b, (n, m)),
            ("Q", &q, (n, n)),
            ("R", &r, (m, m)),
            ("S", &s, (m, n)),
        ] {
            if mat.shape() != shape {
                return Err(Error::Dim(format!(
                    "reduced CARE: {name} is {}x{}, expected {}x{}",
                    mat.rows(),
                    mat.cols(),
                    shape.0,
                    shape.1
                )));
            }
        }
        let asym = q.asymmetry();
        if asym > QSYM_TOL {
            return Err(Error::NotSymmetric {
                name: "Q".into(),
                asym,
            });
        }
        check_weight(&r)?;
        Ok(ReducedCare { a, b, q, r, s })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// `R⁻¹·(Bᵀ·X + S)`, the negated optimal gain.
    pub fn feedback(&self, x: &Mat) -> Result<Mat> {
        let rhs = &(&self.b.transpose() * x) + &self.s;
        solve_linear(&self.r, &rhs)
    }

    /// `𝒜 − B·R⁻¹·(Bᵀ·X + S)`
    pub fn closed_loop(&self, x: &Mat) -> Result<Mat> {
        let k = self.feedback(x)?;
        Ok(&self.a - &(&self.b * &k))
    }

    /// The Riccati operator evaluated at `x`.
    pub fn residual_matrix(&self, x: &Mat) -> Result<Mat> {
        let k = self.feedback(x)?;
        let xb_s = &(x * &self.b) + &self.s.transpose();
        let lin = &(&(x * &self.a) + &(&self.a.transpose() * x)) + &self.q;
        Ok(&lin - &(&xb_s * &k))
    }

    pub fn residual(&self, x: &Mat) -> Result<f64> {
        Ok(self.residual_matrix(x)?.frobenius_norm())
    }
}

fn check_weight(r: &Mat) -> Result<()> {
    if !r.is_square() || !is_pd(r, 0.0)? || r.asymmetry() > QSYM_TOL {
        return Err(Error::Indefinite(
            "control weight block is not symmetric positive definite".into(),
        ));
    }
    Ok(())
}

/// Stabilizing solution of a [`ReducedCare`].
#[derive(Debug, Clone, PartialEq)]
pub struct CareSolution {
    pub x: Mat,
    pub closed_loop: Mat,
    /// Frobenius norm of the Riccati operator at `x`.
    pub residual: f64,
    pub refine_steps: usize,
}

/// Completed-square form `X·Â + Âᵀ·X + Q̂ − X·G·X = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eliminated {
    pub a_hat: Mat,
    pub q_hat: Mat,
    pub g: Mat,
}

pub fn eliminate_cross_term(rc: &ReducedCare) -> Result<Eliminated> {
    check_weight(&rc.r)?;
    let rinv_s = solve_linear(&rc.r, &rc.s)?;
    let rinv_bt = solve_linear(&rc.r, &rc.b.transpose())?;
    Ok(Eliminated {
        a_hat: &rc.a - &(&rc.b * &rinv_s),
        q_hat: symmetrize(&(&rc.q - &(&rc.s.transpose() * &rinv_s))),
        g: symmetrize(&(&rc.b * &rinv_bt)),
    })
}

/// `H = [[Â, −G], [−Q̂, −Âᵀ]]`
pub fn build_hamiltonian(a_hat: &Mat, g: &Mat, q_hat: &Mat) -> Mat {
    let top = a_hat.hstack(&-g);
    let bottom = (-q_hat).hstack(&-&a_hat.transpose());
    top.vstack(&bottom)
}

/// Matrix sign function by the scaled Newton iteration
/// `Z ← (Z/c + c·Z⁻¹)/2` with determinantal scaling `c = |det Z|^{1/N}`.
pub fn matrix_sign(h: &Mat) -> Result<Mat> {
    let dim = h.rows();
    let mut z = h.clone();
    let mut scaling = true;
    for _ in 0..SIGN_MAX_ITER {
        let lu = Lu::factor(&z)?;
        let zinv = lu.solve(&Mat::identity(dim))?;
        let c = if scaling {
            (-lu.log_abs_det() / dim as f64).exp()
        } else {
            1.0
        };
        let next = (&z.scale(c) + &zinv.scale(1.0 / c)).scale(0.5);
        let change = (&next - &z).frobenius_norm() / next.frobenius_norm();
        z = next;
        if !z.is_finite() {
            break;
        }
        if change < 1e-2 {
            scaling = false;
        }
        if change < SIGN_TOL {
            return Ok(z);
        }
    }
    Err(Error::NoConvergence(
        "matrix sign iteration exceeded its budget".into(),
    ))
}

/// Orthonormal basis `[U1; U2]` of the stable invariant subspace of `h`.
pub fn stable_subspace(h: &Mat) -> Result<(Mat, Mat)> {
    if !h.is_square() || !h.rows().is_multiple_of(2) {
        return Err(Error::Dim(format!(
            "Hamiltonian must be 2n x 2n, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let n = h.rows() / 2;
    let spec = spectrum(h)?;
    let closest = spec
        .eigenvalues
        .iter()
        .min_by(|a, b| a.re.abs().total_cmp(&b.re.abs()))
        .map_or(f64::INFINITY, |z| z.re);
    if closest.abs() < IMAG_AXIS_MARGIN {
        return Err(Error::ImaginaryAxis {
            re: closest,
            margin: IMAG_AXIS_MARGIN,
        });
    }
    let stable = spec.count_stable();
    if stable != n {
        return Err(Error::Defect {
            found: stable,
            expected: n,
        });
    }

    let sign = matrix_sign(h)?;
    let projector = (&Mat::identity(2 * n) - &sign).scale(0.5);
    let qr = projector.to_nalgebra().col_piv_qr();
    let q: DMatrix<f64> = qr.q();
    let basis = Mat::from_nalgebra(&q.columns(0, n).into_owned());
    Ok((basis.block(0, 0, n, n), basis.block(n, 0, n, n)))
}

/// Solves `Aclᵀ·X + X·Acl + W = 0` through the Kronecker-vectorized system
/// `(I⊗Aclᵀ + Aclᵀ⊗I)·vec(X) = −vec(W)`.
pub fn solve_lyapunov(acl: &Mat, w: &Mat) -> Result<Mat> {
    let n = acl.rows();
    if !acl.is_square() || w.shape() != (n, n) {
        return Err(Error::Dim(format!(
            "Lyapunov: Acl is {}x{}, W is {}x{}",
            acl.rows(),
            acl.cols(),
            w.rows(),
            w.cols()
        )));
    }
    let at = acl.transpose();
    let eye = Mat::identity(n);
    let op = &kron(&eye, &at) + &kron(&at, &eye);
    let v = solve_linear(&op, &-&vec(w))?;
    Ok(symmetrize(&unvec(&v, n, n)?))
}

fn finish(rc: &ReducedCare, x: Mat, refine_steps: usize) -> Result<CareSolution> {
    let closed_loop = rc.closed_loop(&x)?;
    if !is_hurwitz(&closed_loop, HURWITZ_MARGIN)? {
        return Err(Error::NotStabilizing(format!(
            "closed loop has max real part {:e}",
            spectrum(&closed_loop)?.max_real()
        )));
    }
    let residual = rc.residual(&x)?;
    Ok(CareSolution {
        x,
        closed_loop,
        residual,
        refine_steps,
    })
}

fn refine_tol(x: &Mat) -> f64 {
    let s = 1.0 + x.frobenius_norm();
    REFINE_TOL * s * s
}

/// Newton–Kleinman iteration from a stabilizing start `x0`.
///
/// Each step forms `K = R⁻¹(BᵀX + S)` and solves the Lyapunov equation at
/// `𝒜 − B·K`. Iteration ends when the residual drops below
/// `REFINE_TOL·(1+‖X‖_F)²`, when it stops decreasing (roundoff floor), or
/// after [`MAX_REFINE_STEPS`]. At least one step is always taken.
pub fn kleinman_refine(rc: &ReducedCare, x0: &Mat) -> Result<CareSolution> {
    if x0.shape() != rc.a.shape() {
        return Err(Error::Dim("Kleinman start has the wrong shape".into()));
    }
    let mut x = symmetrize(x0);
    let mut best: Option<(Mat, f64)> = None;
    let mut steps = 0;
    for _ in 0..MAX_REFINE_STEPS {
        let k = rc.feedback(&x)?;
        let acl = &rc.a - &(&rc.b * &k);
        if !is_hurwitz(&acl, HURWITZ_MARGIN)? {
            return Err(Error::NotStabilizing(format!(
                "Newton iterate {steps} has closed-loop max real part {:e}",
                spectrum(&acl)?.max_real()
            )));
        }
        let sk = &rc.s.transpose() * &k;
        let w = &(&(&rc.q + &(&(&k.transpose() * &rc.r) * &k)) - &sk) - &sk.transpose();
        let next = solve_lyapunov(&acl, &w)?;
        steps += 1;
        let res = rc.residual(&next)?;
        if let Some((_, prev)) = &best {
            if steps > 2 && res >= *prev {
                break;
            }
        }
        let done = res <= refine_tol(&next);
        if best.as_ref().is_none_or(|(_, b)| res < *b) {
            best = Some((next.clone(), res));
        }
        x = next;
        if done {
            break;
        }
    }
    let (x, _) = best.expect("at least one step");
    finish(rc, x, steps)
}

/// Stabilizing solution via the Hamiltonian stable subspace, optionally
/// polished by [`kleinman_refine`].
pub fn solve_care(rc: &ReducedCare, refine: bool) -> Result<CareSolution> {
    let elim = eliminate_cross_term(rc)?;
    let h = build_hamiltonian(&elim.a_hat, &elim.g, &elim.q_hat);
    let (u1, u2) = stable_subspace(&h)?;
    let xt = solve_linear(&u1.transpose(), &u2.transpose()).map_err(|e| match e {
        Error::Singular(why) => Error::Singular(format!("subspace basis U1 not invertible: {why}")),
        other => other,
    })?;
    let x = symmetrize(&xt.transpose());
    if refine && frobenius_sq(&rc.residual_matrix(&x)?).sqrt() > refine_tol(&x) {
        kleinman_refine(rc, &x)
    } else {
        finish(rc, x, 0)
    }
}
