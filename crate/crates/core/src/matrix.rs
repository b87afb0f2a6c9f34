//! Dense real-matrix substrate.
//!
//! Everything here is small-scale (dimensions up to a few dozen) and works
//! in binary double precision. Storage is row-major. Eigenvalue work is
//! delegated to `nalgebra`; linear solves, Kronecker machinery and the
//! definiteness helpers are local.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{Complex, DMatrix, Schur, SymmetricEigen};

use crate::error::{Error, Result};

/// Relative pivot threshold used by [`Lu::factor`].
pub const PIVOT_TOL: f64 = 1e-12;
/// Default margin for [`is_hurwitz`].
pub const HURWITZ_MARGIN: f64 = 1e-9;

const EIG_MAX_SWEEPS: usize = 10_000;

/// Dense row-major real matrix.
#[derive(Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn scalar(x: f64) -> Self {
        Mat::from_vec(1, 1, vec![x]).expect("1x1")
    }

    pub fn diag(entries: &[f64]) -> Self {
        let mut m = Mat::zeros(entries.len(), entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from row-major data; fails when the length is wrong.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dim(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    /// Builds a matrix from nested rows. All rows must share one length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != ncols {
                return Err(Error::Dim(format!(
                    "row {i} has {} entries, expected {ncols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Mat {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scale(&self, s: f64) -> Mat {
        self.map(|x| x * s)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    /// Copies the `nr x nc` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Mat {
        assert!(
            r0 + nr <= self.rows && c0 + nc <= self.cols,
            "block out of range"
        );
        let mut b = Mat::zeros(nr, nc);
        for i in 0..nr {
            b.data[i * nc..(i + 1) * nc].copy_from_slice(
                &self.data[(r0 + i) * self.cols + c0..(r0 + i) * self.cols + c0 + nc],
            );
        }
        b
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        assert!(
            r0 + b.rows <= self.rows && c0 + b.cols <= self.cols,
            "block out of range"
        );
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// `[self other]`
    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut m = Mat::zeros(self.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, other);
        m
    }

    /// `[self; other]`
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut m = Mat::zeros(self.rows + other.rows, self.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, 0, other);
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius_sq(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Largest entrywise deviation between `self` and its transpose.
    pub fn asymmetry(&self) -> f64 {
        assert!(self.is_square());
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<f64>) -> Mat {
        let mut out = Mat::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out[(i, j)] = m[(i, j)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}", self.rows, self.cols)?;
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl fmt::Display for Mat {
    /// Six decimals per entry, one row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|x| format!("{x:>12.6}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

impl<'a> Mul<&'a Mat> for &'a Mat {
    type Output = Mat;

    fn mul(self, rhs: &'a Mat) -> Mat {
        assert_eq!(
            self.cols, rhs.rows,
            "product of {}x{} and {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a Mat> for &'a Mat {
    type Output = Mat;

    fn add(self, rhs: &'a Mat) -> Mat {
        assert_eq!(self.shape(), rhs.shape(), "sum of mismatched shapes");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a Mat> for &'a Mat {
    type Output = Mat;

    fn sub(self, rhs: &'a Mat) -> Mat {
        assert_eq!(self.shape(), rhs.shape(), "difference of mismatched shapes");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Mat {
    type Output = Mat;

    fn neg(self) -> Mat {
        self.scale(-1.0)
    }
}

/// Sum of squared entries.
///
/// Entries `(i, j)` and `(j, i)` are combined first and the pairs are summed
/// in a fixed order over `i ≤ j`, so the result is bit-identical for `Mᵀ`.
pub fn frobenius_sq(m: &Mat) -> f64 {
    let sq = |i: usize, j: usize| {
        if i < m.rows && j < m.cols {
            let x = m[(i, j)];
            x * x
        } else {
            0.0
        }
    };
    let k = m.rows.max(m.cols);
    let mut total = 0.0;
    for i in 0..k {
        total += sq(i, i);
        for j in i + 1..k {
            total += sq(i, j) + sq(j, i);
        }
    }
    total
}

/// `(M + Mᵀ) / 2`
pub fn symmetrize(m: &Mat) -> Mat {
    assert!(m.is_square(), "symmetrize needs a square matrix");
    let mut s = m.clone();
    for i in 0..m.rows {
        for j in i + 1..m.cols {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            s[(i, j)] = avg;
            s[(j, i)] = avg;
        }
    }
    s
}

/// LU factorization with partial pivoting, `P·M = L·U`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Mat,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    /// Factors `m`. A pivot smaller than [`PIVOT_TOL`] times the largest
    /// initial entry magnitude is reported as [`Error::Singular`].
    pub fn factor(m: &Mat) -> Result<Lu> {
        if !m.is_square() {
            return Err(Error::Dim(format!("LU of a {}x{} matrix", m.rows, m.cols)));
        }
        let n = m.rows;
        let scale = m.max_abs();
        let threshold = PIVOT_TOL * scale;
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
            if !(pmax > threshold) || scale == 0.0 {
                return Err(Error::Singular(format!(
                    "pivot {pmax:e} in column {k} below {threshold:e}"
                )));
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let piv = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / piv;
                lu[(i, k)] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        lu.data[i * n + j] -= f * lu.data[k * n + j];
                    }
                }
            }
        }
        Ok(Lu { lu, perm, sign })
    }

    pub fn solve(&self, rhs: &Mat) -> Result<Mat> {
        let n = self.lu.rows;
        if rhs.rows != n {
            return Err(Error::Dim(format!(
                "right-hand side has {} rows, system has {n}",
                rhs.rows
            )));
        }
        let p = rhs.cols;
        let mut y = Mat::zeros(n, p);
        for (i, &src) in self.perm.iter().enumerate() {
            y.data[i * p..(i + 1) * p].copy_from_slice(rhs.row(src));
        }
        for c in 0..p {
            for i in 0..n {
                let mut s = y[(i, c)];
                for k in 0..i {
                    s -= self.lu[(i, k)] * y[(k, c)];
                }
                y[(i, c)] = s;
            }
            for i in (0..n).rev() {
                let mut s = y[(i, c)];
                for k in i + 1..n {
                    s -= self.lu[(i, k)] * y[(k, c)];
                }
                y[(i, c)] = s / self.lu[(i, i)];
            }
        }
        Ok(y)
    }

    pub fn det(&self) -> f64 {
        (0..self.lu.rows).fold(self.sign, |d, i| d * self.lu[(i, i)])
    }

    /// `ln |det M|`, free of overflow for badly scaled matrices.
    pub fn log_abs_det(&self) -> f64 {
        (0..self.lu.rows).map(|i| self.lu[(i, i)].abs().ln()).sum()
    }
}

/// Solves `M·Y = RHS` by partial-pivoted elimination.
pub fn solve_linear(m: &Mat, rhs: &Mat) -> Result<Mat> {
    Lu::factor(m)?.solve(rhs)
}

pub fn inverse(m: &Mat) -> Result<Mat> {
    solve_linear(m, &Mat::identity(m.rows))
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let mut out = Mat::zeros(a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Column-stacking vectorization, returned as a column matrix.
pub fn vec(m: &Mat) -> Mat {
    let mut v = Mat::zeros(m.rows * m.cols, 1);
    for j in 0..m.cols {
        for i in 0..m.rows {
            v[(j * m.rows + i, 0)] = m[(i, j)];
        }
    }
    v
}

/// Inverse of [`vec`].
pub fn unvec(v: &Mat, rows: usize, cols: usize) -> Result<Mat> {
    if v.cols != 1 || v.rows != rows * cols {
        return Err(Error::Dim(format!(
            "cannot reshape {}x{} into {rows}x{cols}",
            v.rows, v.cols
        )));
    }
    let mut m = Mat::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            m[(i, j)] = v[(j * rows + i, 0)];
        }
    }
    Ok(m)
}

/// Eigenvalues of a real square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex<f64>>,
}

impl Spectrum {
    pub fn max_real(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Eigenvalue closest to the imaginary axis.
    pub fn min_abs_real(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.re.abs())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn count_stable(&self) -> usize {
        self.eigenvalues.iter().filter(|z| z.re < 0.0).count()
    }
}

pub fn spectrum(m: &Mat) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::Dim(format!(
            "spectrum of a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    if m.rows == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
        });
    }
    if !m.is_finite() {
        return Err(Error::NoConvergence("non-finite matrix entries".into()));
    }
    // The unshifted Francis iteration occasionally cycles; an eigenvalue
    // preserving transform of the input usually breaks the cycle.
    let a = m.to_nalgebra();
    let schur = Schur::try_new(a.clone(), f64::EPSILON, EIG_MAX_SWEEPS)
        .or_else(|| Schur::try_new(a.transpose(), f64::EPSILON, EIG_MAX_SWEEPS))
        .or_else(|| {
            let n = m.rows;
            let q = DMatrix::from_fn(n, n, |i, j| ((7 * i + 3 * j + 1) as f64).sin())
                .qr()
                .q();
            Schur::try_new(q.transpose() * &a * &q, f64::EPSILON, EIG_MAX_SWEEPS)
        })
        .ok_or_else(|| Error::NoConvergence("real Schur iteration exceeded its budget".into()))?;
    Ok(Spectrum {
        eigenvalues: schur.complex_eigenvalues().iter().copied().collect(),
    })
}

/// True iff every eigenvalue has real part below `-margin`.
pub fn is_hurwitz(m: &Mat, margin: f64) -> Result<bool> {
    Ok(spectrum(m)?.max_real() < -margin)
}

/// Eigenvalues of `symmetrize(m)` in ascending order.
pub fn symmetric_eigenvalues(m: &Mat) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::Dim(format!(
            "eigenvalues of a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    if !m.is_finite() {
        return Err(Error::NoConvergence("non-finite matrix entries".into()));
    }
    let s = symmetrize(m).to_nalgebra();
    let eig = SymmetricEigen::try_new(s, f64::EPSILON, EIG_MAX_SWEEPS).ok_or_else(|| {
        Error::NoConvergence("symmetric eigen iteration exceeded its budget".into())
    })?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

pub fn min_eigenvalue_sym(m: &Mat) -> Result<f64> {
    Ok(symmetric_eigenvalues(m)?
        .first()
        .copied()
        .unwrap_or(f64::INFINITY))
}

/// `λmin(symmetrize(m)) ≥ -tol`
pub fn is_psd(m: &Mat, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue_sym(m)? >= -tol)
}

/// `λmin(symmetrize(m)) > tol`
pub fn is_pd(m: &Mat, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue_sym(m)? > tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn m(rows: &[&[f64]]) -> Mat {
        Mat::from_rows(rows).unwrap()
    }

    #[test]
    fn diagonal_solve() {
        let y = solve_linear(&Mat::diag(&[1.0, 2.0]), &m(&[&[2.0], &[1.0]])).unwrap();
        assert_eq!(y, m(&[&[2.0], &[0.5]]));
    }

    #[test]
    fn two_by_two_inverse_matches_closed_form() {
        // inverse of [[a,b],[b,a]] is [[a,-b],[-b,a]] / (a² - b²)
        let a = 1.0;
        let b = 0.5;
        let det = a * a - b * b;
        let expected = m(&[&[a / det, -b / det], &[-b / det, a / det]]);
        let y = solve_linear(&m(&[&[a, b], &[b, a]]), &Mat::identity(2)).unwrap();
        assert_abs_diff_eq!(y[(0, 0)], 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(y[(0, 1)], -2.0 / 3.0, epsilon = 1e-15);
        assert!(frobenius_sq(&(&y - &expected)) < 1e-28);
    }

    #[test]
    fn rank_deficient_is_singular() {
        let err = solve_linear(&m(&[&[1.0, 1.0], &[1.0, 1.0]]), &Mat::identity(2)).unwrap_err();
        assert_eq!(err.code(), "ESINGULAR");
        assert_eq!(
            solve_linear(&Mat::zeros(2, 2), &Mat::identity(2))
                .unwrap_err()
                .code(),
            "ESINGULAR"
        );
    }

    #[test]
    fn solve_rejects_bad_shapes() {
        assert_eq!(
            solve_linear(&Mat::zeros(2, 3), &Mat::zeros(2, 1))
                .unwrap_err()
                .code(),
            "EDIM"
        );
        assert_eq!(
            solve_linear(&Mat::identity(2), &Mat::zeros(3, 1))
                .unwrap_err()
                .code(),
            "EDIM"
        );
    }

    #[test]
    fn determinant_tracks_row_swaps() {
        let lu = Lu::factor(&m(&[&[0.0, 1.0], &[2.0, 0.0]])).unwrap();
        assert_abs_diff_eq!(lu.det(), -2.0, epsilon = 1e-15);
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius_sq(&Mat::zeros(3, 2)), 0.0);
        assert_eq!(frobenius_sq(&m(&[&[1.0, 2.0], &[2.0, 1.0]])), 10.0);
        // first Example-1 iterate for player 1 is the positive root of x² - 1.5x - 2
        let x1 = (1.5 + (1.5f64 * 1.5 + 8.0).sqrt()) / 2.0;
        let d = frobenius_sq(&Mat::scalar(x1 - 0.5));
        assert_abs_diff_eq!(d, 3.4253905, epsilon = 1e-7);
    }

    #[test]
    fn spectrum_examples() {
        let s = spectrum(&Mat::diag(&[-1.0, -1.5])).unwrap();
        let mut re: Vec<f64> = s.eigenvalues.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(re[0], -1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(re[1], -1.0, epsilon = 1e-14);

        let rot = spectrum(&m(&[&[0.0, 1.0], &[-1.0, 0.0]])).unwrap();
        for z in &rot.eigenvalues {
            assert_abs_diff_eq!(z.re, 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(z.im.abs(), 1.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(
            rot.eigenvalues[0].im,
            -rot.eigenvalues[1].im,
            epsilon = 1e-14
        );

        let s = spectrum(&Mat::scalar(0.5 - 2.0)).unwrap();
        assert_eq!(s.eigenvalues, vec![Complex::new(-1.5, 0.0)]);
    }

    #[test]
    fn spectrum_rejects_nonsquare() {
        assert_eq!(spectrum(&Mat::zeros(2, 3)).unwrap_err().code(), "EDIM");
        assert_eq!(
            spectrum(&Mat::scalar(f64::NAN)).unwrap_err().code(),
            "ENOCONV"
        );
    }

    #[test]
    fn hurwitz_examples() {
        assert!(is_hurwitz(&(-&Mat::identity(3)), HURWITZ_MARGIN).unwrap());
        assert!(!is_hurwitz(&m(&[&[0.0, 1.0], &[-1.0, 0.0]]), HURWITZ_MARGIN).unwrap());
        let a5 = m(&[&[-5.0, 0.0, -1.0], &[0.0, -10.0, 0.0], &[-1.0, 0.0, -5.0]]);
        assert!(is_hurwitz(&a5, HURWITZ_MARGIN).unwrap());
    }

    #[test]
    fn kron_examples() {
        let x = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(kron(&Mat::scalar(1.0), &x), x);
        assert_eq!(
            kron(&Mat::identity(2), &Mat::scalar(7.0)),
            Mat::diag(&[7.0, 7.0])
        );
        let k = kron(&x, &Mat::identity(2));
        assert_eq!(k.shape(), (4, 4));
        assert_eq!(k[(2, 0)], 3.0);
        assert_eq!(k[(3, 3)], 4.0);
        assert_eq!(k[(0, 1)], 0.0);
    }

    #[test]
    fn vec_unvec_roundtrip_and_order() {
        let x = m(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]]);
        let v = vec(&x);
        assert_eq!(v.as_slice(), &[1.0, 4.0, 2.0, 5.0, 3.0, 6.0]);
        assert_eq!(unvec(&v, 2, 3).unwrap(), x);
        assert_eq!(unvec(&v, 4, 2).unwrap_err().code(), "EDIM");
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&Mat::diag(&[2.0, 1.0]), 1e-10).unwrap());
        assert!(!is_psd(&(-&Mat::identity(2)), 1e-10).unwrap());
        // eigenvalues (3 ± √5)/2
        let s = m(&[&[1.0, 1.0], &[1.0, 2.0]]);
        let ev = symmetric_eigenvalues(&s).unwrap();
        assert_abs_diff_eq!(ev[0], (3.0 - 5f64.sqrt()) / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ev[1], (3.0 + 5f64.sqrt()) / 2.0, epsilon = 1e-14);
        assert!(is_psd(&s, 1e-10).unwrap());
        assert!(!is_pd(&Mat::diag(&[1.0, 0.0]), 1e-10).unwrap());
    }

    #[test]
    fn symmetrize_and_asymmetry() {
        let a = m(&[&[1.0, 2.0], &[4.0, 3.0]]);
        assert_eq!(a.asymmetry(), 2.0);
        let s = symmetrize(&a);
        assert_eq!(s, m(&[&[1.0, 3.0], &[3.0, 3.0]]));
        assert_eq!(s.asymmetry(), 0.0);
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows: Vec<Vec<f64>> = vec![vec![1.0, 2.0], vec![3.0]];
        assert_eq!(Mat::from_rows(&rows).unwrap_err().code(), "EDIM");
    }

    #[test]
    fn block_ops() {
        let x = m(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0], &[7.0, 8.0, 9.0]]);
        assert_eq!(x.block(1, 1, 2, 2), m(&[&[5.0, 6.0], &[8.0, 9.0]]));
        let top = x.block(0, 0, 1, 3);
        let rest = x.block(1, 0, 2, 3);
        assert_eq!(top.vstack(&rest), x);
        assert_eq!(x.block(0, 0, 3, 1).hstack(&x.block(0, 1, 3, 2)), x);
    }
}
