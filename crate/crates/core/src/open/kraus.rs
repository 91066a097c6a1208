//! Operator-sum representation of channels obtained from system-bath unitaries.

use crate::error::{QdynError, Result};
use crate::linalg::{self, CMatrix};
use crate::measurement::MeasurementSet;
use crate::quantum::{DensityMatrix, Operator, OperatorKind};

const ORTHONORMAL_TOL: f64 = 1e-10;
const COMPLETENESS_TOL: f64 = 1e-9;

/// Initial bath state `rho_B = sum_nu lambda_nu nu nu^dag` and the basis `{mu}`
/// in which the bath is traced out.
#[derive(Debug, Clone)]
pub struct BathSpectral {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
    basis: CMatrix,
}

fn check_orthonormal(m: &CMatrix, what: &str) -> Result<()> {
    let dev = linalg::max_abs_diff(&(m.adjoint() * m), &linalg::identity(m.ncols()));
    if !(dev <= ORTHONORMAL_TOL) {
        return Err(QdynError::InvalidArgument(format!("{what} columns are not orthonormal (deviation {dev:e})")));
    }
    Ok(())
}

impl BathSpectral {
    /// `eigenvectors` and `basis` hold one vector per column; `basis = None` selects the canonical basis.
    pub fn new(eigenvalues: Vec<f64>, eigenvectors: CMatrix, basis: Option<CMatrix>) -> Result<Self> {
        let d = eigenvectors.nrows();
        if eigenvectors.ncols() != d || eigenvalues.len() != d {
            return Err(QdynError::DimensionMismatch { expected: d, found: eigenvalues.len() });
        }
        if eigenvalues.iter().any(|&l| !(l >= 0.0)) {
            return Err(QdynError::InvalidProbabilities("bath eigenvalues must be nonnegative".into()));
        }
        let total: f64 = eigenvalues.iter().sum();
        if (total - 1.0).abs() > ORTHONORMAL_TOL {
            return Err(QdynError::InvalidProbabilities(format!("bath eigenvalues sum to {total}")));
        }
        check_orthonormal(&eigenvectors, "bath eigenvector")?;
        let basis = basis.unwrap_or_else(|| linalg::identity(d));
        if basis.shape() != (d, d) {
            return Err(QdynError::DimensionMismatch { expected: d, found: basis.nrows() });
        }
        check_orthonormal(&basis, "bath basis")?;
        Ok(Self { eigenvalues, eigenvectors, basis })
    }

    /// Spectral data of a bath density matrix, traced in the canonical basis.
    pub fn from_density(rho_b: &DensityMatrix) -> Result<Self> {
        let eig = linalg::eigh(rho_b.matrix());
        let values: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
        let total: f64 = values.iter().sum();
        Self::new(values.iter().map(|l| l / total).collect(), eig.eigenvectors, None)
    }

    pub fn dim(&self) -> usize {
        self.eigenvectors.nrows()
    }

    pub fn density(&self) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for (k, &l) in self.eigenvalues.iter().enumerate() {
            let v = self.eigenvectors.column(k);
            m += v * v.adjoint() * linalg::r(l);
        }
        m
    }
}

/// Operators `K_k` with `sum_k K_k^dag K_k = I`.
#[derive(Debug, Clone)]
pub struct KrausSet {
    operators: Vec<Operator>,
}

impl KrausSet {
    pub fn new(operators: Vec<Operator>) -> Result<Self> {
        let Some(first) = operators.first() else {
            return Err(QdynError::InvalidArgument("Kraus set is empty".into()));
        };
        let d = first.dim();
        let mut sum = CMatrix::zeros(d, d);
        for k in &operators {
            linalg::check_same_dim(d, k.dim())?;
            sum += k.matrix().adjoint() * k.matrix();
        }
        let deviation = linalg::max_abs_diff(&sum, &linalg::identity(d));
        if !(deviation <= COMPLETENESS_TOL) {
            return Err(QdynError::Incomplete { deviation });
        }
        Ok(Self { operators })
    }

    /// The non-selective measurement channel as a Kraus set.
    pub fn from_measurement(ms: &MeasurementSet) -> Self {
        Self { operators: ms.operators().to_vec() }
    }

    pub fn operators(&self) -> &[Operator] {
        &self.operators
    }

    pub fn dim(&self) -> usize {
        self.operators[0].dim()
    }

    /// `max |sum K^dag K - I|`.
    pub fn completeness_residual(&self) -> f64 {
        let d = self.dim();
        let sum = self.operators.iter().fold(CMatrix::zeros(d, d), |acc, k| acc + k.matrix().adjoint() * k.matrix());
        linalg::max_abs_diff(&sum, &linalg::identity(d))
    }
}

/// `K_{mu nu} = sqrt(lambda_nu) (I_S (x) mu^dag) U (I_S (x) nu)`.
///
/// Terms with `lambda_nu = 0` vanish and are omitted.
pub fn kraus_from_joint_unitary(u: &Operator, bath: &BathSpectral, d_s: usize) -> Result<KrausSet> {
    let d_b = bath.dim();
    linalg::check_same_dim(d_s * d_b, u.dim())?;
    let deviation = linalg::unitarity_residual(u.matrix());
    if !(deviation <= 1e-9) {
        return Err(QdynError::NotUnitary { deviation });
    }
    let id_s = linalg::identity(d_s);
    let mut ops = Vec::new();
    for (nu_idx, &lambda) in bath.eigenvalues.iter().enumerate() {
        if lambda == 0.0 {
            continue;
        }
        let nu = bath.eigenvectors.column(nu_idx).into_owned();
        let right = linalg::kron(&id_s, &CMatrix::from_column_slice(d_b, 1, nu.as_slice()));
        let weighted = u.matrix() * right * linalg::r(lambda.sqrt());
        for mu_idx in 0..d_b {
            let mu = bath.basis.column(mu_idx).into_owned();
            let left = linalg::kron(&id_s, &CMatrix::from_column_slice(d_b, 1, mu.as_slice()).adjoint());
            ops.push(Operator::from_raw(&left * &weighted, OperatorKind::General));
        }
    }
    KrausSet::new(ops)
}

/// `rho -> sum_k K_k rho K_k^dag`.
pub fn apply_kraus(ks: &KrausSet, rho: &DensityMatrix) -> Result<DensityMatrix> {
    linalg::check_same_dim(ks.dim(), rho.dim())?;
    let d = rho.dim();
    let mut out = CMatrix::zeros(d, d);
    for k in &ks.operators {
        out += k.matrix() * rho.matrix() * k.matrix().adjoint();
    }
    let out = DensityMatrix::new(out)?;
    match rho.dims() {
        Some(dims) => out.with_dims(dims.clone()),
        None => Ok(out),
    }
}
