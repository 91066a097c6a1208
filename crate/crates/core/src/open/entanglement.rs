//! Purity and entanglement diagnostics for bipartite states.

use crate::error::Result;
use crate::linalg;
use crate::measurement::Observable;
use crate::quantum::{CompositeDims, DensityMatrix, StateVector};

use super::{partial_transpose, reduced_density, Subsystem};

/// Default tolerance for purity-based classification.
pub const PURITY_TOL: f64 = 1e-8;

/// A partial-transpose eigenvalue below this certifies entanglement.
pub const NPT_THRESHOLD: f64 = -1e-9;

/// `Tr(rho^2)`, between `1/d` and `1`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

pub fn is_pure(rho: &DensityMatrix, tol: f64) -> bool {
    (rho.purity() - 1.0).abs() <= tol
}

pub fn is_maximally_mixed(rho: &DensityMatrix, tol: f64) -> bool {
    (rho.purity() - 1.0 / rho.dim() as f64).abs() <= tol
}

/// Maximal-mixedness of both reductions.
///
/// A state is classed as maximally entangled when its `A` reduction is maximally
/// mixed. Note that the maximally mixed joint state `I / (d_A d_B)` passes this
/// test although it is separable. The `B` reduction is reported alongside.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaxEntanglement {
    pub reduced_a_maximally_mixed: bool,
    pub reduced_b_maximally_mixed: bool,
}

impl MaxEntanglement {
    pub fn is_maximally_entangled(&self) -> bool {
        self.reduced_a_maximally_mixed
    }
}

pub fn is_maximally_entangled(rho: &DensityMatrix, dims: &CompositeDims, tol: f64) -> Result<MaxEntanglement> {
    let ra = reduced_density(rho, dims, Subsystem::A)?;
    let rb = reduced_density(rho, dims, Subsystem::B)?;
    Ok(MaxEntanglement {
        reduced_a_maximally_mixed: is_maximally_mixed(&ra, tol),
        reduced_b_maximally_mixed: is_maximally_mixed(&rb, tol),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PptVerdict {
    /// Positive partial transpose: consistent with separability, not a proof of it.
    Ppt,
    /// Negative partial transpose: the state is entangled.
    Npt,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptResult {
    pub verdict: PptVerdict,
    pub min_eigenvalue: f64,
}

/// Peres test on the partial transpose over subsystem `A`.
pub fn ppt_test(rho: &DensityMatrix, dims: &CompositeDims) -> Result<PptResult> {
    let pt = partial_transpose(&rho.as_operator(), dims, Subsystem::A)?;
    let min_eigenvalue = linalg::min_eigenvalue(pt.matrix());
    let verdict = if min_eigenvalue < NPT_THRESHOLD { PptVerdict::Npt } else { PptVerdict::Ppt };
    Ok(PptResult { verdict, min_eigenvalue })
}

/// `C = sqrt(2 (1 - Tr rho_A^2))` for a bipartite pure state; `0 <= C <= sqrt(2)`.
///
/// `1 - Tr rho_A^2` is expanded as twice the sum of squared 2x2 minors of the
/// amplitude matrix `Psi[i, k] = psi[i d_B + k]`, so product states give exactly zero
/// instead of the square root of a round-off residue.
pub fn concurrence_pure(psi: &StateVector, dims: &CompositeDims) -> Result<f64> {
    let (da, db) = dims.split()?;
    dims.check_total(psi.dim())?;
    let amp = |i: usize, k: usize| psi.amplitudes()[i * db + k];
    let mut minors = 0.0;
    for i in 0..da {
        for j in i + 1..da {
            for k in 0..db {
                for l in k + 1..db {
                    minors += (amp(i, k) * amp(j, l) - amp(i, l) * amp(j, k)).norm_sqr();
                }
            }
        }
    }
    Ok(2.0 * minors.sqrt())
}

/// `Tr(M_A rho_A)` for an observable acting on subsystem `A` only.
pub fn expectation_on_subsystem(m_a: &Observable, rho: &DensityMatrix, dims: &CompositeDims) -> Result<f64> {
    let (da, _) = dims.split()?;
    linalg::check_same_dim(da, m_a.dim())?;
    let ra = reduced_density(rho, dims, Subsystem::A)?;
    Ok(linalg::trace(&(m_a.operator().matrix() * ra.matrix())).re)
}

/// True iff `||rho - rho_A (x) rho_B||_HS <= tol`.
pub fn is_factorized(rho: &DensityMatrix, dims: &CompositeDims, tol: f64) -> Result<bool> {
    let ra = reduced_density(rho, dims, Subsystem::A)?;
    let rb = reduced_density(rho, dims, Subsystem::B)?;
    let product = linalg::kron(ra.matrix(), rb.matrix());
    Ok(linalg::hs_norm(&(rho.matrix() - product)) <= tol)
}
