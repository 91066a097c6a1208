//! Seeded samplers for random quantum objects.
//!
//! All samplers take an explicit RNG so results are reproducible from a seed.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, CMatrix, CVector};
use crate::quantum::{DensityMatrix, Operator, OperatorKind, StateVector};

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| linalg::c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Haar-distributed unitary (QR of a Ginibre matrix with the phase of `R` removed).
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Operator {
    let qr = ginibre(rng, d, d).qr();
    let mut q = qr.q();
    let rmat = qr.r();
    for j in 0..d {
        let diag = rmat[(j, j)];
        if diag.norm() > 0.0 {
            let phase = diag / diag.norm();
            let mut col = q.column_mut(j);
            col *= phase;
        }
    }
    Operator::from_raw(q, OperatorKind::Unitary)
}

/// Random Hermitian matrix `(G + G^dag) / 2`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Operator {
    Operator::from_raw(linalg::hermitian_part(&ginibre(rng, d, d)), OperatorKind::Hermitian)
}

pub fn state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> StateVector {
    let v: CVector = ginibre(rng, d, 1).column(0).into_owned();
    let norm = v.norm();
    StateVector::from_raw(v / linalg::r(norm), None)
}

/// Full-rank density matrix `G G^dag / Tr(G G^dag)`.
pub fn density<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DensityMatrix {
    let g = ginibre(rng, d, d);
    let m = &g * g.adjoint();
    let tr = linalg::trace(&m).re;
    DensityMatrix::from_raw(linalg::hermitian_part(&(m / linalg::r(tr))), None)
}

/// `count` operators `M_k` on dimension `d` with `sum_k M_k^dag M_k = I`,
/// cut from the first `d` columns of a Haar unitary on `count * d`.
pub fn complete_set<R: Rng + ?Sized>(rng: &mut R, d: usize, count: usize) -> Vec<Operator> {
    let u = unitary(rng, d * count);
    (0..count)
        .map(|k| Operator::from_raw(u.matrix().view((k * d, 0), (d, d)).into_owned(), OperatorKind::General))
        .collect()
}
