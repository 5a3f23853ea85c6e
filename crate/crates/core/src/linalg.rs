//! Dense complex matrices and the small-dimension spectral routines the rest
//! of the crate is built on.
//!
//! Everything here is sized for the two-qutrit problem (dimension 9, or 81 for
//! vectorized operators), so the eigensolver is a plain cyclic Jacobi sweep and
//! singular values come from one-sided Jacobi orthogonalization. Both use a
//! relative rotation threshold, which keeps tiny eigenvalues of graded or
//! block-sparse matrices accurate far below the absolute rounding level.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default tolerance for the Hermiticity check in [`hermitian_eigenvalues`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Maximum number of Jacobi sweeps before giving up.
pub const MAX_SWEEPS: usize = 100;

// Pairs whose coupling is below this fraction of the geometric mean of their
// diagonal entries (or column norms) are treated as decoupled.
const ROTATION_EPS: f64 = f64::EPSILON;

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{rows}x{cols} = {} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// Real diagonal matrix.
    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { C64::new(diag[i], 0.0) } else { C64::new(0.0, 0.0) })
    }

    /// Real matrix from nested rows. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| C64::new(rows[i][j], 0.0))
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, factor: C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |m[i][j] - conj(m[j][i])|`; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `max |(U U†)[i][j] - δ_ij|`.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.matmul(&self.adjoint()).max_abs_diff(&ComplexMatrix::identity(self.rows))
    }

    /// `(m + m†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        kron(self, other)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4e}{:+.4e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product; `kron(a, b)[(i*rb + k, j*cb + l)] = a[(i, j)] * b[(k, l)]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (rb, cb) = (b.rows, b.cols);
    ComplexMatrix::from_fn(a.rows * rb, a.cols * cb, |r, c| {
        a[(r / rb, c / cb)] * b[(r % rb, c % cb)]
    })
}

/// All eigenvalues of a Hermitian matrix, ascending.
///
/// Inputs within `tol` of Hermitian are symmetrized as `(m + m†)/2` first.
pub fn hermitian_eigenvalues(m: &ComplexMatrix, tol: f64) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let defect = m.hermiticity_defect();
    if defect.is_nan() || defect > tol {
        return Err(Error::NotHermitian { defect, tol });
    }
    let mut a = m.hermitian_part();
    let mut eig = jacobi_diagonalize(&mut a)?;
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Cyclic two-sided Jacobi on a Hermitian matrix, in place. Returns the
/// (unsorted) diagonal after convergence.
fn jacobi_diagonalize(a: &mut ComplexMatrix) -> Result<Vec<f64>> {
    let n = a.rows;
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                if mag <= ROTATION_EPS * (app * aqq).abs().sqrt() {
                    continue;
                }
                rotated = true;

                // Phase that makes the (p, q) element real, then a real rotation.
                let phase = apq / mag;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau.is_finite() {
                    let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
                    sign / (tau.abs() + (1.0 + tau * tau).sqrt())
                } else {
                    0.0
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let w_qp = -phase.conj() * s;
                let w_qq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * w_qp;
                    a[(k, q)] = akp * s + akq * w_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c + aqk * w_qp.conj();
                    a[(q, k)] = apk * s + aqk * w_qq.conj();
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(app - t * mag, 0.0);
                a[(q, q)] = C64::new(aqq + t * mag, 0.0);
            }
        }
        if !rotated {
            return Ok((0..n).map(|i| a[(i, i)].re).collect());
        }
    }
    Err(Error::NoConvergence { sweeps: MAX_SWEEPS })
}

/// Singular values, descending; `min(rows, cols)` of them.
///
/// One-sided (Hestenes) Jacobi: columns are orthogonalized pairwise by unitary
/// rotations and the singular values are the final column norms.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let work = if m.rows >= m.cols { m.clone() } else { m.adjoint() };
    let (rows, cols) = (work.rows, work.cols);
    let mut columns: Vec<Vec<C64>> = (0..cols)
        .map(|j| (0..rows).map(|i| work[(i, j)]).collect())
        .collect();

    let threshold = (rows as f64).sqrt() * ROTATION_EPS;
    // Columns this small have lost their precision to underflow.
    let negligible = f64::MIN_POSITIVE / f64::EPSILON;
    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let (left, right) = columns.split_at_mut(q);
                let cp = &mut left[p];
                let cq = &mut right[0];
                let alpha: f64 = cp.iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cq.iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cp.iter().zip(cq.iter()).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || alpha.min(beta) < negligible || g <= threshold * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;

                let phase_conj = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta.is_finite() {
                    let sign = if zeta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                } else {
                    0.0
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let yp = *y * phase_conj;
                    let xp = *x;
                    *x = xp * c - yp * s;
                    *y = xp * s + yp * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }
    let mut sv: Vec<f64> = columns
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    fn random_hermitian(rng: &mut StdRng, n: usize) -> ComplexMatrix {
        random_matrix(rng, n, n).hermitian_part()
    }

    fn random_unitary(rng: &mut StdRng, n: usize) -> ComplexMatrix {
        // Gram-Schmidt on the columns of a random complex matrix.
        let g = random_matrix(rng, n, n);
        let mut cols: Vec<Vec<C64>> = Vec::new();
        for j in 0..n {
            let mut v: Vec<C64> = (0..n).map(|i| g[(i, j)]).collect();
            for u in &cols {
                let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.iter_mut().for_each(|z| *z /= norm);
            cols.push(v);
        }
        ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
    }

    /// det(m) by Gaussian elimination with partial pivoting.
    fn determinant(m: &ComplexMatrix) -> C64 {
        let n = m.rows();
        let mut a = m.clone();
        let mut det = c(1.0, 0.0);
        for k in 0..n {
            let pivot = (k..n).max_by(|&x, &y| a[(x, k)].norm().total_cmp(&a[(y, k)].norm())).unwrap();
            if a[(pivot, k)].norm() == 0.0 {
                return c(0.0, 0.0);
            }
            if pivot != k {
                for j in 0..n {
                    let tmp = a[(k, j)];
                    a[(k, j)] = a[(pivot, j)];
                    a[(pivot, j)] = tmp;
                }
                det = -det;
            }
            det *= a[(k, k)];
            for i in (k + 1)..n {
                let f = a[(i, k)] / a[(k, k)];
                for j in k..n {
                    let akj = a[(k, j)];
                    a[(i, j)] -= f * akj;
                }
            }
        }
        det
    }

    /// Roots of the characteristic polynomial by scanning for sign changes of
    /// the (real) determinant and bisecting each bracket.
    fn char_poly_roots(h: &ComplexMatrix) -> Vec<f64> {
        let n = h.rows();
        let bound = h.frobenius_norm() + 1.0;
        let p = |lambda: f64| {
            let shifted = h - &ComplexMatrix::identity(n).scale_real(lambda);
            determinant(&shifted).re
        };
        let steps = 20_000;
        let mut roots = Vec::new();
        let mut prev_x = -bound;
        let mut prev = p(prev_x);
        for i in 1..=steps {
            let x = -bound + 2.0 * bound * i as f64 / steps as f64;
            let val = p(x);
            if prev == 0.0 {
                roots.push(prev_x);
            } else if prev.signum() != val.signum() && val != 0.0 {
                let (mut lo, mut hi) = (prev_x, x);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if p(mid).signum() == p(lo).signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
            prev_x = x;
            prev = val;
        }
        roots
    }

    #[test]
    fn identity_eigenvalues() {
        let eig = hermitian_eigenvalues(&ComplexMatrix::identity(9), HERMITIAN_TOL).unwrap();
        assert_eq!(eig.len(), 9);
        assert!(eig.iter().all(|&x| (x - 1.0).abs() < 1e-15));
    }

    #[test]
    fn diagonal_eigenvalues_sorted() {
        let eig = hermitian_eigenvalues(&ComplexMatrix::from_diag(&[3.0, -2.0, 0.0]), HERMITIAN_TOL).unwrap();
        assert_eq!(eig, vec![-2.0, 0.0, 3.0]);
    }

    #[test]
    fn eigenvalues_match_characteristic_polynomial() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in 2..=4 {
            for _ in 0..5 {
                let h = random_hermitian(&mut rng, n);
                let roots = char_poly_roots(&h);
                let eig = hermitian_eigenvalues(&h, HERMITIAN_TOL).unwrap();
                assert_eq!(roots.len(), n, "oracle found {roots:?}");
                for (a, b) in eig.iter().zip(&roots) {
                    assert!((a - b).abs() < 1e-9, "{eig:?} vs {roots:?}");
                }
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(matches!(hermitian_eigenvalues(&m, 1e-10), Err(Error::NotHermitian { .. })));
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eigenvalues(&rect, 1e-10), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn near_hermitian_input_is_symmetrized() {
        let mut m = ComplexMatrix::from_diag(&[1.0, 2.0]);
        m[(0, 1)] = c(0.5, 1e-12);
        m[(1, 0)] = c(0.5, 0.0);
        let eig = hermitian_eigenvalues(&m, 1e-10).unwrap();
        let expected = [1.5 - 0.5f64.sqrt(), 1.5 + 0.5f64.sqrt()];
        assert!((eig[0] - expected[0]).abs() < 1e-12 && (eig[1] - expected[1]).abs() < 1e-12);
    }

    #[test]
    fn graded_matrix_keeps_tiny_eigenvalue() {
        // [[1e-20, 1e-20], [1e-20, 2e-20]] has eigenvalues (3 ± √5)/2 · 1e-20.
        let m = ComplexMatrix::from_real_rows(&[&[1e-20, 1e-20], &[1e-20, 2e-20]]);
        let eig = hermitian_eigenvalues(&m, 1e-10).unwrap();
        let lo = (3.0 - 5f64.sqrt()) / 2.0 * 1e-20;
        assert!(((eig[0] - lo) / lo).abs() < 1e-12);
    }

    #[test]
    fn eigenvalue_sum_is_trace_and_spectrum_is_unitarily_invariant() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..10 {
            let h = random_hermitian(&mut rng, 9);
            let eig = hermitian_eigenvalues(&h, HERMITIAN_TOL).unwrap();
            assert!((eig.iter().sum::<f64>() - h.trace().re).abs() < 1e-10);
            let u = random_unitary(&mut rng, 9);
            let conj = &(&u * &h) * &u.adjoint();
            let eig2 = hermitian_eigenvalues(&conj, 1e-10).unwrap();
            for (a, b) in eig.iter().zip(&eig2) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn singular_values_simple_cases() {
        let sv = singular_values(&ComplexMatrix::identity(9)).unwrap();
        assert!(sv.iter().all(|&x| (x - 1.0).abs() < 1e-15));
        let sv = singular_values(&ComplexMatrix::zeros(4, 3)).unwrap();
        assert_eq!(sv, vec![0.0; 3]);
        let wide = ComplexMatrix::from_real_rows(&[&[3.0, 0.0, 0.0], &[0.0, -4.0, 0.0]]);
        assert_eq!(singular_values(&wide).unwrap(), vec![4.0, 3.0]);
    }

    #[test]
    fn singular_values_match_gram_eigenvalues() {
        let mut rng = StdRng::seed_from_u64(3);
        for (r, cdim) in [(3, 3), (4, 2), (2, 5), (9, 9)] {
            let m = random_matrix(&mut rng, r, cdim);
            let sv = singular_values(&m).unwrap();
            assert_eq!(sv.len(), r.min(cdim));
            let small = if r >= cdim { m.adjoint().matmul(&m) } else { m.matmul(&m.adjoint()) };
            let mut oracle: Vec<f64> = hermitian_eigenvalues(&small, 1e-10)
                .unwrap()
                .into_iter()
                .map(|l| l.max(0.0).sqrt())
                .collect();
            oracle.reverse();
            for (a, b) in sv.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-10, "{sv:?} vs {oracle:?}");
            }
            assert!(sv.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn singular_values_are_unitarily_invariant() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..10 {
            let m = random_matrix(&mut rng, 9, 9);
            let u = random_unitary(&mut rng, 9);
            let v = random_unitary(&mut rng, 9);
            let a = singular_values(&m).unwrap();
            let b = singular_values(&(&(&u * &m) * &v)).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn rank_one_trace_norm_is_exact() {
        // Exactly rank one: a clamped Gram-eigenvalue route would add sqrt(eps) noise here.
        let mut rng = StdRng::seed_from_u64(9);
        let u: Vec<C64> = (0..9).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let v: Vec<C64> = (0..9).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let m = ComplexMatrix::outer(&u, &v);
        let nu = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((trace_norm(&m).unwrap() - nu * nv).abs() < 1e-13);
    }

    #[test]
    fn trace_norm_bounds_trace() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 5, 5);
            assert!(trace_norm(&m).unwrap() + 1e-12 >= m.trace().norm());
        }
        assert!((trace_norm(&ComplexMatrix::identity(9)).unwrap() - 9.0).abs() < 1e-14);
    }

    #[test]
    fn kron_examples() {
        let i3 = ComplexMatrix::identity(3);
        assert_eq!(kron(&i3, &i3), ComplexMatrix::identity(9));
        let k = kron(&ComplexMatrix::from_diag(&[1.0, 0.0, 0.0]), &ComplexMatrix::from_diag(&[0.0, 1.0, 0.0]));
        let mut expected = vec![0.0; 9];
        expected[1] = 1.0;
        assert_eq!(k, ComplexMatrix::from_diag(&expected));

        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..10 {
            let a = random_matrix(&mut rng, 3, 3);
            let b = random_matrix(&mut rng, 3, 3);
            let direct: C64 = (0..9).map(|i| a[(i / 3, i / 3)] * b[(i % 3, i % 3)]).sum();
            assert!((kron(&a, &b).trace() - a.trace() * b.trace()).norm() < 1e-13);
            assert!((kron(&a, &b).trace() - direct).norm() < 1e-13);
        }
    }

    #[test]
    fn constructor_validates() {
        assert!(ComplexMatrix::new(2, 2, vec![c(1.0, 0.0); 3]).is_err());
        assert!(matches!(
            ComplexMatrix::new(1, 2, vec![c(1.0, 0.0), c(f64::NAN, 0.0)]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn repeated_columns_converge() {
        // Three identical columns collapse into one; the others underflow.
        let m = ComplexMatrix::from_fn(9, 9, |i, j| {
            if i % 4 == 0 && j % 4 == 0 {
                c(1.0 / 9.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let sv = singular_values(&m).unwrap();
        assert!((sv[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!(sv[1..].iter().all(|&s| s < 1e-15));
    }
}
