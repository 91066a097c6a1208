//! Dense complex matrix helpers shared by every module.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{QdynError, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff_vec(a: &CVector, b: &CVector) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch in max_abs_diff_vec");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `max |A - A^dag|`.
pub fn hermiticity_residual(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `max |U^dag U - I|`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    max_abs_diff(&(u.adjoint() * u), &identity(u.nrows()))
}

pub fn trace(a: &CMatrix) -> Complex64 {
    a.diagonal().iter().sum()
}

/// Frobenius (Hilbert-Schmidt) norm.
pub fn hs_norm(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `(A + A^dag) / 2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * r(0.5)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i * b.len() + j] = x * y;
        }
    }
    out
}

pub fn outer(ket: &CVector, bra: &CVector) -> CMatrix {
    ket * bra.adjoint()
}

/// Spectral decomposition of a Hermitian matrix with eigenvalues in ascending order.
///
/// Eigenvector phases are fixed so that the first component with modulus above
/// `1e-8` is real and positive, which makes the output reproducible for a given
/// input regardless of solver internals.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, aligned with `eigenvalues`.
    pub eigenvectors: CMatrix,
}

pub fn eigh(a: &CMatrix) -> HermitianEigen {
    let n = a.nrows();
    let sym = hermitian_part(a);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let mut vectors = CMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(eig.eigenvalues[src]);
        let mut col = eig.eigenvectors.column(src).into_owned();
        if let Some(pivot) = col.iter().find(|z| z.norm() > 1e-8).copied() {
            let phase = pivot.conj() / pivot.norm();
            col *= phase;
        }
        let norm = col.norm();
        if norm > 0.0 {
            col /= r(norm);
        }
        vectors.set_column(dst, &col);
    }
    HermitianEigen { eigenvalues: values, eigenvectors: vectors }
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn eigvalsh(a: &CMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = SymmetricEigen::new(hermitian_part(a)).eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

pub fn min_eigenvalue(a: &CMatrix) -> f64 {
    eigvalsh(a).first().copied().unwrap_or(0.0)
}

/// Solves `A x = B` by LU with partial pivoting. Returns `None` if `A` is singular.
pub fn lu_solve(a: CMatrix, b: &CMatrix) -> Option<CMatrix> {
    a.lu().solve(b)
}

pub fn check_square(a: &CMatrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(QdynError::InvalidArgument(format!("matrix must be square, got {}x{}", a.nrows(), a.ncols())));
    }
    Ok(a.nrows())
}

pub fn check_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(QdynError::DimensionMismatch { expected, found });
    }
    Ok(())
}
