//! Problem data for the coupled Riccati system and the five reference examples.
//!
//! A problem is the tuple `(A, B1, B2, Q1, Q2, R1, R2)`. Each player's cost
//! weight `Ri` is a symmetric `(m1+m2) x (m1+m2)` matrix; its four sub-blocks
//! are exposed through [`CostBlocks`].

use crate::error::{Error, Result};
use crate::matrix::{min_eigenvalue_sym, Mat};

/// Entrywise symmetry tolerance for input data.
pub const SYM_TOL: f64 = 1e-12;
/// Eigenvalue tolerance for definiteness of input data.
pub const DEF_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dims {
    pub n: usize,
    pub m1: usize,
    pub m2: usize,
}

impl Dims {
    pub fn new(n: usize, m1: usize, m2: usize) -> Result<Self> {
        if n == 0 || m1 == 0 || m2 == 0 {
            return Err(Error::Dim(format!(
                "dimensions must be positive, got n={n}, m1={m1}, m2={m2}"
            )));
        }
        Ok(Dims { n, m1, m2 })
    }

    /// `m1 + m2`
    pub fn m(&self) -> usize {
        self.m1 + self.m2
    }
}

/// The four blocks of one player's cost weight.
#[derive(Debug, Clone, PartialEq)]
pub struct CostBlocks {
    pub r11: Mat,
    pub r12: Mat,
    pub r21: Mat,
    pub r22: Mat,
}

impl CostBlocks {
    /// Reassembles `[[r11, r12], [r21, r22]]`.
    pub fn assemble(&self) -> Mat {
        self.r11
            .hstack(&self.r12)
            .vstack(&self.r21.hstack(&self.r22))
    }
}

/// Splits `r` into its player-indexed blocks.
pub fn blocks(r: &Mat, dims: Dims) -> Result<CostBlocks> {
    let m = dims.m();
    if r.shape() != (m, m) {
        return Err(Error::Dim(format!(
            "cost weight is {}x{}, expected {m}x{m}",
            r.rows(),
            r.cols()
        )));
    }
    let (m1, m2) = (dims.m1, dims.m2);
    Ok(CostBlocks {
        r11: r.block(0, 0, m1, m1),
        r12: r.block(0, m1, m1, m2),
        r21: r.block(m1, 0, m2, m1),
        r22: r.block(m1, m1, m2, m2),
    })
}

/// Data of a two-player coupled Riccati problem.
///
/// Construction checks shapes only; definiteness and symmetry are the job of
/// [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    dims: Dims,
    a: Mat,
    b1: Mat,
    b2: Mat,
    q1: Mat,
    q2: Mat,
    r1: Mat,
    r2: Mat,
}

impl ProblemSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        dims: Dims,
        a: Mat,
        b1: Mat,
        b2: Mat,
        q1: Mat,
        q2: Mat,
        r1: Mat,
        r2: Mat,
    ) -> Result<Self> {
        let Dims { n, m1, m2 } = Dims::new(dims.n, dims.m1, dims.m2)?;
        let m = m1 + m2;
        let expect = [
            ("A", &a, (n, n)),
            ("B1", &b1, (n, m1)),
            ("B2", &b2, (n, m2)),
            ("Q1", &q1, (n, n)),
            ("Q2", &q2, (n, n)),
            ("R1", &r1, (m, m)),
            ("R2", &r2, (m, m)),
        ];
        for (name, mat, shape) in expect {
            if mat.shape() != shape {
                return Err(Error::Dim(format!(
                    "{name} is {}x{}, expected {}x{}",
                    mat.rows(),
                    mat.cols(),
                    shape.0,
                    shape.1
                )));
            }
            if !mat.is_finite() {
                return Err(Error::Dim(format!("{name} has non-finite entries")));
            }
        }
        Ok(ProblemSpec {
            dims,
            a,
            b1,
            b2,
            q1,
            q2,
            r1,
            r2,
        })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }
    pub fn a(&self) -> &Mat {
        &self.a
    }
    pub fn b1(&self) -> &Mat {
        &self.b1
    }
    pub fn b2(&self) -> &Mat {
        &self.b2
    }
    pub fn q1(&self) -> &Mat {
        &self.q1
    }
    pub fn q2(&self) -> &Mat {
        &self.q2
    }
    pub fn r1(&self) -> &Mat {
        &self.r1
    }
    pub fn r2(&self) -> &Mat {
        &self.r2
    }

    /// `B = [B1 B2]`
    pub fn b(&self) -> Mat {
        self.b1.hstack(&self.b2)
    }

    pub fn r1_blocks(&self) -> CostBlocks {
        blocks(&self.r1, self.dims).expect("shape checked at construction")
    }

    pub fn r2_blocks(&self) -> CostBlocks {
        blocks(&self.r2, self.dims).expect("shape checked at construction")
    }

    /// Matrix of the joint gain condition, `[[R1_11, R1_12], [R2_21, R2_22]]`.
    ///
    /// Mixes rows of both players' weights, so it is generally nonsymmetric.
    pub fn coupling_matrix(&self) -> Mat {
        let m1 = self.dims.m1;
        let m = self.dims.m();
        let mut out = self.r2.clone();
        out.set_block(0, 0, &self.r1.block(0, 0, m1, m));
        out
    }
}

/// Outcome of [`validate`] on an acceptable problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedProblem {
    pub spec: ProblemSpec,
    /// Whether `Q1` and `Q2` are positive semidefinite. Failing this is
    /// reported but does not reject the problem.
    pub q_psd: [bool; 2],
}

impl ValidatedProblem {
    pub fn warnings(&self) -> Vec<String> {
        self.q_psd
            .iter()
            .enumerate()
            .filter(|(_, ok)| !**ok)
            .map(|(i, _)| format!("Q{} is not positive semidefinite", i + 1))
            .collect()
    }
}

/// Checks symmetry of `Q1, Q2, R1, R2` and definiteness of the diagonal
/// control-weight blocks `R1_11` and `R2_22`.
///
/// The full `Ri` is not required to be definite (Example 1 has singular
/// weights). `Qi` semidefiniteness is recorded in [`ValidatedProblem::q_psd`].
pub fn validate(spec: &ProblemSpec) -> Result<ValidatedProblem> {
    let spec = ProblemSpec::new(
        spec.dims,
        spec.a.clone(),
        spec.b1.clone(),
        spec.b2.clone(),
        spec.q1.clone(),
        spec.q2.clone(),
        spec.r1.clone(),
        spec.r2.clone(),
    )?;
    for (name, m) in [
        ("Q1", &spec.q1),
        ("Q2", &spec.q2),
        ("R1", &spec.r1),
        ("R2", &spec.r2),
    ] {
        let asym = m.asymmetry();
        if asym > SYM_TOL {
            return Err(Error::NotSymmetric {
                name: name.into(),
                asym,
            });
        }
    }
    let r111 = spec.r1_blocks().r11;
    let r222 = spec.r2_blocks().r22;
    for (name, m) in [("R1_11", &r111), ("R2_22", &r222)] {
        let lmin = min_eigenvalue_sym(m)?;
        if !(lmin > DEF_TOL) {
            return Err(Error::Indefinite(format!(
                "{name} is not positive definite (smallest eigenvalue {lmin:e})"
            )));
        }
    }
    let q_psd = [
        min_eigenvalue_sym(&spec.q1)? > -DEF_TOL,
        min_eigenvalue_sym(&spec.q2)? > -DEF_TOL,
    ];
    Ok(ValidatedProblem { spec, q_psd })
}

/// Like [`validate`] but rejects indefinite `Qi` as well.
pub fn validate_strict(spec: &ProblemSpec) -> Result<ValidatedProblem> {
    let v = validate(spec)?;
    if let Some(w) = v.warnings().into_iter().next() {
        return Err(Error::Indefinite(w));
    }
    Ok(v)
}

/// Candidate or computed pair of value matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct ValuePair {
    pub x1: Mat,
    pub x2: Mat,
}

/// Feedback gains of the two players.
#[derive(Debug, Clone, PartialEq)]
pub struct GainPair {
    pub theta1: Mat,
    pub theta2: Mat,
}

impl GainPair {
    /// `Θ = [Θ1; Θ2]`, shape `(m1+m2) x n`.
    pub fn stacked(&self) -> Mat {
        self.theta1.vstack(&self.theta2)
    }

    pub fn from_stacked(theta: &Mat, m1: usize) -> GainPair {
        let n = theta.cols();
        GainPair {
            theta1: theta.block(0, 0, m1, n),
            theta2: theta.block(m1, 0, theta.rows() - m1, n),
        }
    }
}

/// A reference problem together with its published solution.
#[derive(Debug, Clone)]
pub struct Example {
    pub id: usize,
    pub spec: ProblemSpec,
    pub expected: ValuePair,
}

impl Example {
    pub fn summary(&self) -> String {
        let d = self.spec.dims();
        format!("n={}, m1={}, m2={}", d.n, d.m1, d.m2)
    }
}

fn mat(rows: &[&[f64]]) -> Mat {
    Mat::from_rows(rows).expect("literal matrix")
}

/// Returns the data of reference example `id` (1 through 5) and the
/// published solution pair.
pub fn builtin_example(id: usize) -> Result<(ProblemSpec, ValuePair)> {
    let ex = example(id)?;
    Ok((ex.spec, ex.expected))
}

pub fn example(id: usize) -> Result<Example> {
    let (dims, a, b1, b2, q1, q2, r1, r2, x1, x2) = match id {
        1 => (
            Dims::new(1, 1, 1)?,
            mat(&[&[1.0]]),
            mat(&[&[1.0]]),
            mat(&[&[1.0]]),
            mat(&[&[2.0]]),
            mat(&[&[2.5]]),
            mat(&[&[1.0, 0.0], &[0.0, 0.0]]),
            mat(&[&[0.0, 0.0], &[0.0, 2.0]]),
            mat(&[&[2.0]]),
            mat(&[&[1.0]]),
        ),
        2 => (
            Dims::new(2, 1, 1)?,
            mat(&[&[-1.0, 0.0], &[0.0, -1.0]]),
            mat(&[&[1.0], &[0.0]]),
            mat(&[&[0.0], &[1.0]]),
            mat(&[&[3.0, 0.0], &[0.0, 2.75]]),
            mat(&[&[2.0, 0.0], &[0.0, 2.5]]),
            Mat::identity(2),
            mat(&[&[2.0, 0.0], &[0.0, 2.0]]),
            Mat::identity(2),
            Mat::identity(2),
        ),
        3 => (
            Dims::new(2, 2, 1)?,
            mat(&[&[-1.0, 0.0], &[0.0, -1.0]]),
            Mat::identity(2),
            mat(&[&[1.0], &[1.0]]),
            mat(&[&[4.25, 2.25], &[2.25, 3.0]]),
            mat(&[&[2.5, 0.0], &[0.0, 2.0]]),
            mat(&[&[1.0, 0.5, 0.0], &[0.5, 1.0, 0.0], &[0.0, 0.0, 1.0]]),
            mat(&[&[2.0, 0.0, 0.0], &[0.0, 2.0, 1.0], &[0.0, 1.0, 2.0]]),
            mat(&[&[1.0, 0.5], &[0.5, 1.0]]),
            Mat::identity(2),
        ),
        4 => (
            Dims::new(2, 2, 2)?,
            mat(&[&[-1.0, 0.0], &[0.0, -1.0]]),
            Mat::identity(2),
            mat(&[&[1.0, 0.5], &[0.5, 1.0]]),
            mat(&[&[4.5, 2.75], &[2.75, 19.0 / 6.0]]),
            mat(&[&[8.0, -0.5], &[-0.5, 19.0 / 6.0]]),
            r1_four(),
            r2_four(),
            mat(&[&[1.0, 0.5], &[0.5, 1.0]]),
            mat(&[&[2.0, 0.0], &[0.0, 1.0]]),
        ),
        5 => (
            Dims::new(3, 2, 2)?,
            mat(&[&[-5.0, 0.0, -1.0], &[0.0, -10.0, 0.0], &[-1.0, 0.0, -5.0]]),
            mat(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 1.0]]),
            mat(&[&[1.0, 0.5], &[0.5, 1.0], &[0.0, 1.0]]),
            mat(&[
                &[13.1852, 19.1111, 3.8704],
                &[19.1111, 43.4167, 3.9722],
                &[3.8704, 3.9722, 11.8241],
            ]),
            mat(&[
                &[21.8519, -0.7222, 3.9815],
                &[-0.7222, 26.1667, 25.2222],
                &[3.9815, 25.2222, 31.6852],
            ]),
            r1_four(),
            r2_four(),
            mat(&[&[1.0, 1.0, 0.0], &[1.0, 2.0, 0.0], &[0.0, 0.0, 1.0]]),
            mat(&[&[2.0, 0.0, 0.0], &[0.0, 1.0, 1.0], &[0.0, 1.0, 2.0]]),
        ),
        other => return Err(Error::Range(other)),
    };
    Ok(Example {
        id,
        spec: ProblemSpec::new(dims, a, b1, b2, q1, q2, r1, r2)?,
        expected: ValuePair { x1, x2 },
    })
}

// Examples 4 and 5 share their cost weights.
fn r1_four() -> Mat {
    mat(&[
        &[1.0, 0.5, 0.0, 0.0],
        &[0.5, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.5],
        &[0.0, 0.0, 0.5, 1.0],
    ])
}

fn r2_four() -> Mat {
    mat(&[
        &[2.0, 0.0, 0.0, 0.0],
        &[0.0, 2.0, 1.0, 0.0],
        &[0.0, 1.0, 2.0, 1.0],
        &[0.0, 0.0, 1.0, 2.0],
    ])
}

pub const EXAMPLE_IDS: std::ops::RangeInclusive<usize> = 1..=5;
