//! Column-stacked vectorization and the matrix form of the Lindbladian.
//!
//! With `vec` stacking columns, `vec(A X B) = (B^T (x) A) vec(X)`, so the
//! commutator part is `-i (I (x) H - H^T (x) I)`.

use crate::error::{QdynError, Result};
use crate::linalg::{self, CMatrix, CVector, I};
use crate::quantum::{Operator, OperatorKind};

use super::LindbladModel;

/// Column `j` of `rho` occupies entries `j d .. j d + d - 1`.
pub fn vectorize(rho: &CMatrix) -> CVector {
    // nalgebra stores matrices column-major, which is exactly column stacking.
    CVector::from_column_slice(rho.as_slice())
}

pub fn devectorize(v: &CVector, d: usize) -> Result<Operator> {
    if v.len() != d * d {
        return Err(QdynError::DimensionMismatch { expected: d * d, found: v.len() });
    }
    Ok(Operator::from_raw(CMatrix::from_column_slice(d, d, v.as_slice()), OperatorKind::General))
}

fn commutator_super(h: &CMatrix) -> CMatrix {
    let id = linalg::identity(h.nrows());
    (linalg::kron(&id, h) - linalg::kron(&h.transpose(), &id)) * (-I)
}

/// `-i (I (x) H - H^T (x) I)`; anti-Hermitian for Hermitian `H`.
pub fn lvn_superoperator(h: &Operator) -> Operator {
    Operator::from_raw(commutator_super(h.matrix()), OperatorKind::General)
}

/// Full Lindbladian at time `t` acting on `vectorize(rho)`.
pub fn lindblad_superoperator(model: &LindbladModel, t: f64) -> Result<Operator> {
    let h = model.hamiltonian().evaluate(t)?;
    let mut s = commutator_super(h.matrix());
    let id = linalg::identity(model.dim());
    for c in model.collapses() {
        let l = c.operator().matrix();
        let ldl = l.adjoint() * l;
        // vec(L rho L^dag) = (conj(L) (x) L) vec(rho)
        let jump = linalg::kron(&l.map(|z| z.conj()), l);
        let anti = linalg::kron(&id, &ldl) + linalg::kron(&ldl.transpose(), &id);
        s += (jump - anti * linalg::r(0.5)) * linalg::r(c.gamma());
    }
    Ok(Operator::from_raw(s, OperatorKind::General))
}
