//! Liouville-von Neumann and Lindblad generators and their time integration.

use crate::closed::{grid, TimeDependentHamiltonian, Trajectory};
use crate::error::{QdynError, Result};
use crate::linalg::{self, CMatrix, I};
use crate::quantum::{DensityMatrix, Operator, OperatorKind};

use super::superop::{devectorize, lindblad_superoperator, vectorize};

/// Dissipation channel `sqrt(gamma) L`.
#[derive(Debug, Clone)]
pub struct CollapseOperator {
    gamma: f64,
    op: Operator,
}

impl CollapseOperator {
    pub fn new(gamma: f64, op: Operator) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(QdynError::InvalidArgument(format!("collapse rate must be positive, got {gamma}")));
        }
        Ok(Self { gamma, op })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn operator(&self) -> &Operator {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }
}

/// Hamiltonian plus collapse channels, all on the same dimension.
#[derive(Debug, Clone)]
pub struct LindbladModel {
    hamiltonian: TimeDependentHamiltonian,
    collapses: Vec<CollapseOperator>,
}

impl LindbladModel {
    pub fn new(hamiltonian: TimeDependentHamiltonian, collapses: Vec<CollapseOperator>) -> Result<Self> {
        for c in &collapses {
            linalg::check_same_dim(hamiltonian.dim(), c.dim())?;
        }
        Ok(Self { hamiltonian, collapses })
    }

    pub fn hamiltonian(&self) -> &TimeDependentHamiltonian {
        &self.hamiltonian
    }

    pub fn collapses(&self) -> &[CollapseOperator] {
        &self.collapses
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }
}

/// `-i [H, rho]`.
pub fn lvn_rhs(h: &Operator, rho: &Operator) -> Result<Operator> {
    linalg::check_same_dim(h.dim(), rho.dim())?;
    let comm = h.matrix() * rho.matrix() - rho.matrix() * h.matrix();
    Ok(Operator::from_raw(comm * (-I), OperatorKind::General))
}

/// `gamma (L rho L^dag - (L^dag L rho + rho L^dag L) / 2)`.
pub fn lindblad_dissipator(c: &CollapseOperator, rho: &Operator) -> Result<Operator> {
    linalg::check_same_dim(c.dim(), rho.dim())?;
    Ok(Operator::from_raw(dissipator_matrix(c, rho.matrix()), OperatorKind::General))
}

fn dissipator_matrix(c: &CollapseOperator, rho: &CMatrix) -> CMatrix {
    let l = c.op.matrix();
    let l_dag = l.adjoint();
    let ldl = &l_dag * l;
    let jump = l * rho * &l_dag;
    let anti = &ldl * rho + rho * &ldl;
    (jump - anti * linalg::r(0.5)) * linalg::r(c.gamma)
}

/// `-i [H(t), rho] + sum_a D_a(rho)`.
pub fn lindblad_rhs(model: &LindbladModel, t: f64, rho: &Operator) -> Result<Operator> {
    linalg::check_same_dim(model.dim(), rho.dim())?;
    let h = model.hamiltonian.evaluate(t)?;
    let mut out = lvn_rhs(&h, rho)?.into_matrix();
    for c in &model.collapses {
        out += dissipator_matrix(c, rho.matrix());
    }
    Ok(Operator::from_raw(out, OperatorKind::General))
}

/// Thresholds monitored on every stored Lindblad state.
const TRACE_TOL: f64 = 1e-9;
const HERMITIAN_TOL: f64 = 1e-9;
const EIGEN_FLOOR: f64 = -1e-7;

/// Integrates the vectorized Lindblad equation with the implicit midpoint rule.
///
/// Each stored state is checked for unit trace and Hermiticity. Positivity is
/// monitored rather than enforced; a violation aborts with
/// [`QdynError::PositivityViolation`], which usually means the grid is too coarse.
pub fn evolve_lindblad(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    t0: f64,
    t1: f64,
    n_steps: usize,
) -> Result<Trajectory<DensityMatrix>> {
    linalg::check_same_dim(model.dim(), rho0.dim())?;
    let times = grid(t0, t1, n_steps)?;
    let d = rho0.dim();
    let id = linalg::identity(d * d);
    let mut v = CMatrix::from_column_slice(d * d, 1, vectorize(rho0.as_operator().matrix()).as_slice());
    let mut states = Vec::with_capacity(times.len());
    states.push(rho0.clone());
    for w in times.windows(2) {
        let (t, dt) = (w[0], w[1] - w[0]);
        let generator = lindblad_superoperator(model, t + 0.5 * dt)?.into_matrix() * linalg::r(0.5 * dt);
        let explicit = (&id + &generator) * &v;
        v = linalg::lu_solve(&id - &generator, &explicit).ok_or(QdynError::SingularSystem { t })?;
        let rho = devectorize(&v.column(0).into_owned(), d)?.into_matrix();
        states.push(checked_state(rho, w[1], rho0)?);
    }
    Trajectory::new(times, states)
}

fn checked_state(rho: CMatrix, t: f64, like: &DensityMatrix) -> Result<DensityMatrix> {
    let trace = linalg::trace(&rho);
    if (trace - linalg::ONE).norm() > TRACE_TOL {
        return Err(QdynError::BadTrace { trace: trace.re });
    }
    let deviation = linalg::hermiticity_residual(&rho);
    if deviation > HERMITIAN_TOL {
        return Err(QdynError::NotHermitian { deviation });
    }
    let min_eigenvalue = linalg::min_eigenvalue(&rho);
    if min_eigenvalue < EIGEN_FLOOR {
        return Err(QdynError::PositivityViolation { t, min_eigenvalue });
    }
    Ok(DensityMatrix::from_raw(rho, like.dims().cloned()))
}
