use crate::error::{QdynError, Result};
use crate::linalg::{self, CMatrix};

use super::{CompositeDims, Operator, OperatorKind, StateVector, Tolerances};

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    dims: Option<CompositeDims>,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::with_tolerances(matrix, &Tolerances::default())
    }

    pub fn with_tolerances(matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        linalg::check_square(&matrix)?;
        if matrix.nrows() == 0 {
            return Err(QdynError::DimensionTooSmall { min: 1, found: 0 });
        }
        let deviation = linalg::hermiticity_residual(&matrix);
        if !(deviation <= tol.hermitian) {
            return Err(QdynError::NotHermitian { deviation });
        }
        let trace = linalg::trace(&matrix);
        if !((trace.re - 1.0).abs() <= tol.trace) {
            return Err(QdynError::BadTrace { trace: trace.re });
        }
        let min_eigenvalue = linalg::min_eigenvalue(&matrix);
        if min_eigenvalue < -tol.psd_floor {
            return Err(QdynError::NotPositive { min_eigenvalue });
        }
        Ok(Self { matrix, dims: None })
    }

    pub(crate) fn from_raw(matrix: CMatrix, dims: Option<CompositeDims>) -> Self {
        Self { matrix, dims }
    }

    /// `psi psi^dag`, carrying over the state's subsystem dims.
    pub fn from_pure(psi: &StateVector) -> Self {
        Self { matrix: linalg::outer(psi.amplitudes(), psi.amplitudes()), dims: psi.dims().cloned() }
    }

    /// `I / d`.
    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(QdynError::DimensionTooSmall { min: 1, found: 0 });
        }
        Ok(Self { matrix: linalg::identity(d) * linalg::r(1.0 / d as f64), dims: None })
    }

    pub fn with_dims(mut self, dims: CompositeDims) -> Result<Self> {
        dims.check_total(self.dim())?;
        self.dims = Some(dims);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dims(&self) -> Option<&CompositeDims> {
        self.dims.as_ref()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn as_operator(&self) -> Operator {
        Operator::from_raw(self.matrix.clone(), OperatorKind::Hermitian)
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        // Tr(rho rho) = sum_ij |rho_ij|^2 for Hermitian rho.
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix)
    }

    /// Diagonal entries (computational-basis populations).
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    /// `rho (x) sigma` with concatenated dims.
    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        let left = self.dims.clone().or_else(|| CompositeDims::new(vec![self.dim()]).ok());
        let right = other.dims.clone().or_else(|| CompositeDims::new(vec![other.dim()]).ok());
        let dims = match (left, right) {
            (Some(l), Some(r)) => Some(l.concat(&r)),
            _ => None,
        };
        DensityMatrix { matrix: linalg::kron(&self.matrix, &other.matrix), dims }
    }
}

/// Probability-weighted list of pure states.
#[derive(Debug, Clone)]
pub struct PureStateEnsemble {
    members: Vec<(f64, StateVector)>,
}

impl PureStateEnsemble {
    pub fn new(members: Vec<(f64, StateVector)>) -> Result<Self> {
        Self::with_tolerance(members, Tolerances::default().trace)
    }

    pub fn with_tolerance(members: Vec<(f64, StateVector)>, tol: f64) -> Result<Self> {
        let Some((_, first)) = members.first() else {
            return Err(QdynError::InvalidProbabilities("ensemble is empty".into()));
        };
        let d = first.dim();
        let mut total = 0.0;
        for (q, psi) in &members {
            if !(q.is_finite() && *q >= 0.0) {
                return Err(QdynError::InvalidProbabilities(format!("weight {q} is negative or not finite")));
            }
            linalg::check_same_dim(d, psi.dim())?;
            total += q;
        }
        if (total - 1.0).abs() > tol {
            return Err(QdynError::InvalidProbabilities(format!("weights sum to {total}")));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(f64, StateVector)] {
        &self.members
    }
}

/// `rho = sum_i q_i psi_i psi_i^dag`.
pub fn density_from_ensemble(ensemble: &PureStateEnsemble) -> Result<DensityMatrix> {
    let (_, first) = &ensemble.members[0];
    let d = first.dim();
    let mut m = CMatrix::zeros(d, d);
    for (q, psi) in &ensemble.members {
        m += linalg::outer(psi.amplitudes(), psi.amplitudes()) * linalg::r(*q);
    }
    let dims = first.dims().cloned();
    let mut rho = DensityMatrix::new(m)?;
    rho.dims = dims;
    Ok(rho)
}
