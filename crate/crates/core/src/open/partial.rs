use crate::error::{QdynError, Result};
use crate::linalg::{self, CMatrix};
use crate::quantum::{CompositeDims, DensityMatrix, Operator, OperatorKind};

/// Factor of a bipartite system `H_A (x) H_B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

impl TryFrom<usize> for Subsystem {
    type Error = QdynError;

    fn try_from(index: usize) -> Result<Self> {
        match index {
            0 => Ok(Subsystem::A),
            1 => Ok(Subsystem::B),
            _ => Err(QdynError::NotBipartite(index + 1)),
        }
    }
}

fn bipartite(dims: &CompositeDims, total: usize) -> Result<(usize, usize)> {
    let split = dims.split()?;
    dims.check_total(total)?;
    Ok(split)
}

/// Traces out every subsystem except `keep`.
pub fn partial_trace(o: &Operator, dims: &CompositeDims, keep: Subsystem) -> Result<Operator> {
    let (da, db) = bipartite(dims, o.dim())?;
    let m = o.matrix();
    let out = match keep {
        Subsystem::A => CMatrix::from_fn(da, da, |i, j| (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()),
        Subsystem::B => CMatrix::from_fn(db, db, |k, l| (0..da).map(|i| m[(i * db + k, i * db + l)]).sum()),
    };
    Ok(Operator::from_raw(out, OperatorKind::General))
}

/// Reduced state of `keep`, validated as a density matrix.
pub fn reduced_density(rho: &DensityMatrix, dims: &CompositeDims, keep: Subsystem) -> Result<DensityMatrix> {
    let reduced = partial_trace(&rho.as_operator(), dims, keep)?;
    DensityMatrix::new(linalg::hermitian_part(reduced.matrix()))
}

/// Transposes the `which` factor: `|i><j| (x) |m><n| -> |j><i| (x) |m><n|` for `which = A`.
pub fn partial_transpose(rho: &Operator, dims: &CompositeDims, which: Subsystem) -> Result<Operator> {
    let (da, db) = bipartite(dims, rho.dim())?;
    let m = rho.matrix();
    let n = da * db;
    let out = CMatrix::from_fn(n, n, |row, col| {
        let (i, mu) = (row / db, row % db);
        let (j, nu) = (col / db, col % db);
        match which {
            Subsystem::A => m[(j * db + mu, i * db + nu)],
            Subsystem::B => m[(i * db + nu, j * db + mu)],
        }
    });
    Ok(Operator::from_raw(out, OperatorKind::General))
}
