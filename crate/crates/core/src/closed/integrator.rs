//! Implicit midpoint integration of `d psi/dt = -i H(t) psi`.
//!
//! One step solves `(I + i dt/2 H(t + dt/2)) psi' = (I - i dt/2 H(t + dt/2)) psi`
//! with a dense LU factorization. For Hermitian `H` the step matrix is a Cayley
//! transform and therefore unitary, so the norm is conserved up to round-off.

use crate::error::{QdynError, Result};
use crate::linalg::{self, CMatrix};
use crate::quantum::{Operator, OperatorKind, StateVector};

use super::{TimeDependentHamiltonian, Trajectory};

fn cayley_step(h: &Operator, rhs: &CMatrix, t: f64, dt: f64) -> Result<CMatrix> {
    let half = linalg::c(0.0, 0.5 * dt);
    let hm = h.matrix() * half;
    let id = linalg::identity(h.dim());
    let lhs = &id + &hm;
    let explicit = (&id - &hm) * rhs;
    linalg::lu_solve(lhs, &explicit).ok_or(QdynError::SingularSystem { t })
}

fn check_step(dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(QdynError::InvalidArgument(format!("time step must be positive, got {dt}")));
    }
    Ok(())
}

pub(crate) fn grid(t0: f64, t1: f64, n_steps: usize) -> Result<Vec<f64>> {
    if n_steps == 0 {
        return Err(QdynError::InvalidArgument("n_steps must be at least 1".into()));
    }
    if !(t1 > t0) {
        return Err(QdynError::InvalidArgument(format!("final time {t1} must exceed initial time {t0}")));
    }
    let span = t1 - t0;
    Ok((0..=n_steps).map(|j| t0 + span * (j as f64) / (n_steps as f64)).collect())
}

pub fn implicit_midpoint_step(h: &TimeDependentHamiltonian, psi: &StateVector, t: f64, dt: f64) -> Result<StateVector> {
    check_step(dt)?;
    linalg::check_same_dim(h.dim(), psi.dim())?;
    let hm = h.evaluate(t + 0.5 * dt)?;
    let rhs = CMatrix::from_column_slice(psi.dim(), 1, psi.amplitudes().as_slice());
    let out = cayley_step(&hm, &rhs, t, dt)?;
    Ok(StateVector::from_raw(out.column(0).into_owned(), psi.dims().cloned()))
}

/// Advances every column of `init` across the uniform grid, calling `visit` on each grid point.
fn march(
    h: &TimeDependentHamiltonian,
    init: CMatrix,
    times: &[f64],
    mut visit: impl FnMut(&CMatrix),
) -> Result<CMatrix> {
    let mut cur = init;
    visit(&cur);
    for w in times.windows(2) {
        let (t, dt) = (w[0], w[1] - w[0]);
        let hm = h.evaluate(t + 0.5 * dt)?;
        cur = cayley_step(&hm, &cur, t, dt)?;
        visit(&cur);
    }
    Ok(cur)
}

/// Integrates from `t0` to `t1` in `n_steps` uniform implicit-midpoint steps,
/// returning all `n_steps + 1` grid states.
pub fn evolve(
    h: &TimeDependentHamiltonian,
    psi0: &StateVector,
    t0: f64,
    t1: f64,
    n_steps: usize,
) -> Result<Trajectory<StateVector>> {
    linalg::check_same_dim(h.dim(), psi0.dim())?;
    let times = grid(t0, t1, n_steps)?;
    let d = psi0.dim();
    let mut states = Vec::with_capacity(times.len());
    let init = CMatrix::from_column_slice(d, 1, psi0.amplitudes().as_slice());
    march(h, init, &times, |m| states.push(StateVector::from_raw(m.column(0).into_owned(), psi0.dims().cloned())))?;
    Trajectory::new(times, states)
}

/// Solution operator `U(t1, t0)`: its columns are the evolved basis vectors.
pub fn propagator(h: &TimeDependentHamiltonian, t0: f64, t1: f64, n_steps: usize) -> Result<Operator> {
    let times = grid(t0, t1, n_steps)?;
    let u = march(h, linalg::identity(h.dim()), &times, |_| {})?;
    let deviation = linalg::unitarity_residual(&u);
    if !(deviation <= 1e-9) {
        return Err(QdynError::NotUnitary { deviation });
    }
    Ok(Operator::from_raw(u, OperatorKind::Unitary))
}
