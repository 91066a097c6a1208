use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{QdynError, Result};
use crate::linalg::{self, CMatrix, CVector, I, ONE, ZERO};

use super::{StateVector, Tolerances};

/// Role an operator was validated for at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    General,
    Hermitian,
    Unitary,
}

/// Square complex matrix, optionally validated as Hermitian or unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    matrix: CMatrix,
    kind: OperatorKind,
}

impl Operator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        linalg::check_square(&matrix)?;
        Ok(Self { matrix, kind: OperatorKind::General })
    }

    pub fn hermitian(matrix: CMatrix) -> Result<Self> {
        Self::hermitian_with_tolerance(matrix, Tolerances::default().hermitian)
    }

    pub fn hermitian_with_tolerance(matrix: CMatrix, tol: f64) -> Result<Self> {
        linalg::check_square(&matrix)?;
        let deviation = linalg::hermiticity_residual(&matrix);
        if !(deviation <= tol) {
            return Err(QdynError::NotHermitian { deviation });
        }
        Ok(Self { matrix, kind: OperatorKind::Hermitian })
    }

    pub fn unitary(matrix: CMatrix) -> Result<Self> {
        Self::unitary_with_tolerance(matrix, Tolerances::default().unitary)
    }

    pub fn unitary_with_tolerance(matrix: CMatrix, tol: f64) -> Result<Self> {
        linalg::check_square(&matrix)?;
        let deviation = linalg::unitarity_residual(&matrix);
        if !(deviation <= tol) {
            return Err(QdynError::NotUnitary { deviation });
        }
        Ok(Self { matrix, kind: OperatorKind::Unitary })
    }

    /// Row-major `(re, im)` entries of a `d x d` matrix.
    pub fn from_row_parts(d: usize, parts: &[(f64, f64)]) -> Result<Self> {
        if parts.len() != d * d {
            return Err(QdynError::DimensionMismatch { expected: d * d, found: parts.len() });
        }
        let data: Vec<Complex64> = parts.iter().map(|&(re, im)| linalg::c(re, im)).collect();
        Self::new(CMatrix::from_row_slice(d, d, &data))
    }

    pub(crate) fn from_raw(matrix: CMatrix, kind: OperatorKind) -> Self {
        Self { matrix, kind }
    }

    pub fn identity(d: usize) -> Self {
        Self { matrix: linalg::identity(d), kind: OperatorKind::Unitary }
    }

    pub fn zeros(d: usize) -> Self {
        Self { matrix: CMatrix::zeros(d, d), kind: OperatorKind::Hermitian }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Conjugate transpose. Hermitian and unitary kinds are preserved.
    pub fn dagger(&self) -> Operator {
        Operator { matrix: self.matrix.adjoint(), kind: self.kind }
    }

    pub fn trace(&self) -> Complex64 {
        linalg::trace(&self.matrix)
    }

    pub fn scale(&self, factor: Complex64) -> Operator {
        let kind = if factor.im == 0.0 && self.kind == OperatorKind::Hermitian {
            OperatorKind::Hermitian
        } else {
            OperatorKind::General
        };
        Operator { matrix: &self.matrix * factor, kind }
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        linalg::check_same_dim(self.dim(), other.dim())?;
        let kind = if self.kind == OperatorKind::Hermitian && other.kind == OperatorKind::Hermitian {
            OperatorKind::Hermitian
        } else {
            OperatorKind::General
        };
        Ok(Operator { matrix: &self.matrix + &other.matrix, kind })
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.add(&other.scale(-ONE))
    }

    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        linalg::check_same_dim(self.dim(), other.dim())?;
        let kind = if self.kind == OperatorKind::Unitary && other.kind == OperatorKind::Unitary {
            OperatorKind::Unitary
        } else {
            OperatorKind::General
        };
        Ok(Operator { matrix: &self.matrix * &other.matrix, kind })
    }

    /// `A psi` as a raw (not renormalized) vector.
    pub fn apply(&self, psi: &StateVector) -> Result<CVector> {
        linalg::check_same_dim(self.dim(), psi.dim())?;
        Ok(&self.matrix * psi.amplitudes())
    }

    /// Re-tags the operator as Hermitian after checking.
    pub fn into_hermitian(self) -> Result<Operator> {
        Operator::hermitian(self.matrix)
    }

    /// Re-tags the operator as unitary after checking.
    pub fn into_unitary(self) -> Result<Operator> {
        Operator::unitary(self.matrix)
    }
}

impl Mul for &Operator {
    type Output = Operator;

    /// Panics on dimension mismatch; use [`Operator::compose`] for a checked product.
    fn mul(self, rhs: &Operator) -> Operator {
        self.compose(rhs).expect("operator dimension mismatch")
    }
}

/// `|ket><bra|`.
pub fn outer_product(ket: &StateVector, bra: &StateVector) -> Result<Operator> {
    linalg::check_same_dim(ket.dim(), bra.dim())?;
    Operator::new(linalg::outer(ket.amplitudes(), bra.amplitudes()))
}

fn check_ladder_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(QdynError::DimensionTooSmall { min: 2, found: d });
    }
    Ok(())
}

/// Truncated lowering operator: `a|n> = sqrt(n)|n-1>`, superdiagonal `sqrt(1) .. sqrt(d-1)`.
pub fn lowering(d: usize) -> Result<Operator> {
    check_ladder_dim(d)?;
    let mut m = CMatrix::zeros(d, d);
    for n in 1..d {
        m[(n - 1, n)] = linalg::r((n as f64).sqrt());
    }
    Ok(Operator::from_raw(m, OperatorKind::General))
}

/// Truncated raising operator, the conjugate transpose of [`lowering`].
pub fn raising(d: usize) -> Result<Operator> {
    Ok(lowering(d)?.dagger())
}

/// Number operator `a^dag a = diag(0, 1, ..., d-1)`.
pub fn number(d: usize) -> Result<Operator> {
    let a = lowering(d)?;
    let n = a.dagger().matrix() * a.matrix();
    Ok(Operator::from_raw(n, OperatorKind::Hermitian))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

pub fn pauli(axis: PauliAxis) -> Operator {
    let m = match axis {
        PauliAxis::X => [ZERO, ONE, ONE, ZERO],
        PauliAxis::Y => [ZERO, -I, I, ZERO],
        PauliAxis::Z => [ONE, ZERO, ZERO, -ONE],
    };
    // Pauli matrices are both Hermitian and unitary; tag the stronger spectral role.
    Operator::from_raw(CMatrix::from_row_slice(2, 2, &m), OperatorKind::Hermitian)
}

/// Kronecker product `A (x) B`; the first argument is the leftmost subsystem.
pub fn kron(a: &Operator, b: &Operator) -> Operator {
    let kind = if a.kind == b.kind { a.kind } else { OperatorKind::General };
    Operator::from_raw(linalg::kron(a.matrix(), b.matrix()), kind)
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    linalg::check_same_dim(a.dim(), b.dim())?;
    let ab = a.matrix() * b.matrix();
    let ba = b.matrix() * a.matrix();
    Ok(Operator::from_raw(ab - ba, OperatorKind::General))
}

/// `{A, B} = AB + BA`.
pub fn anticommutator(a: &Operator, b: &Operator) -> Result<Operator> {
    linalg::check_same_dim(a.dim(), b.dim())?;
    let ab = a.matrix() * b.matrix();
    let ba = b.matrix() * a.matrix();
    let kind = if a.kind == OperatorKind::Hermitian && b.kind == OperatorKind::Hermitian {
        OperatorKind::Hermitian
    } else {
        OperatorKind::General
    };
    Ok(Operator::from_raw(ab + ba, kind))
}

/// Hilbert-Schmidt product `Tr(A^dag B)`.
pub fn hs_inner(a: &Operator, b: &Operator) -> Result<Complex64> {
    linalg::check_same_dim(a.dim(), b.dim())?;
    Ok(a.matrix().iter().zip(b.matrix().iter()).map(|(x, y)| x.conj() * y).sum())
}
