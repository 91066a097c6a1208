use crate::error::{QdynError, Result};
use crate::linalg::{self, CMatrix};
use crate::quantum::{DensityMatrix, Operator, OperatorKind, StateVector, Tolerances};

/// Principal square root of a Hermitian PSD matrix.
///
/// Eigenvalues in `[-1e-9, 0)` are clamped to zero; anything more negative is an error.
pub fn psd_sqrt(a: &Operator) -> Result<Operator> {
    let deviation = linalg::hermiticity_residual(a.matrix());
    if !(deviation <= Tolerances::default().hermitian) {
        return Err(QdynError::NotHermitian { deviation });
    }
    Ok(Operator::from_raw(sqrt_matrix(a.matrix())?, OperatorKind::Hermitian))
}

// Eigenvalues this close to zero are roundoff from a rank-deficient input; their square
// roots would otherwise leak ~1e-8 into the result.
fn noise_floor(values: &[f64]) -> f64 {
    let scale = values.iter().fold(1.0f64, |m, l| m.max(l.abs()));
    64.0 * f64::EPSILON * values.len() as f64 * scale
}

fn clamped_sqrt(l: f64, floor: f64) -> f64 {
    if l <= floor {
        0.0
    } else {
        l.sqrt()
    }
}

fn sqrt_matrix(a: &CMatrix) -> Result<CMatrix> {
    let eig = linalg::eigh(a);
    let noise = noise_floor(&eig.eigenvalues);
    let floor = Tolerances::default().psd_floor;
    let n = a.nrows();
    let mut out = CMatrix::zeros(n, n);
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        if l < -floor {
            return Err(QdynError::NotPositive { min_eigenvalue: l });
        }
        let v = eig.eigenvectors.column(k);
        out += v * v.adjoint() * linalg::r(clamped_sqrt(l, noise));
    }
    Ok(out)
}

/// `F = Tr sqrt(rho^{1/2} sigma rho^{1/2})`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    linalg::check_same_dim(rho.dim(), sigma.dim())?;
    let root = sqrt_matrix(rho.matrix())?;
    let inner = linalg::hermitian_part(&(&root * sigma.matrix() * &root));
    let values = linalg::eigvalsh(&inner);
    let noise = noise_floor(&values);
    Ok(values.iter().map(|&l| clamped_sqrt(l, noise)).sum())
}

/// `F(psi psi^dag, sigma) = sqrt(psi^dag sigma psi)`.
pub fn fidelity_pure(psi: &StateVector, sigma: &DensityMatrix) -> Result<f64> {
    linalg::check_same_dim(psi.dim(), sigma.dim())?;
    let v = psi.amplitudes();
    Ok(v.dotc(&(sigma.matrix() * v)).re.max(0.0).sqrt())
}

/// `|<psi, phi>|` for two pure states.
pub fn fidelity_pure_pure(psi: &StateVector, phi: &StateVector) -> Result<f64> {
    Ok(psi.inner(phi)?.norm())
}
