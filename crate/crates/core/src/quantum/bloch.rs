use std::f64::consts::PI;

use crate::error::{QdynError, Result};
use crate::linalg::{self, CMatrix, CVector};

use super::{pauli, DensityMatrix, PauliAxis, StateVector, Tolerances};

/// Bloch vector `(Tr(rho sx), Tr(rho sy), Tr(rho sz))` of a qubit density matrix.
pub fn bloch_vector(rho: &DensityMatrix) -> Result<[f64; 3]> {
    linalg::check_same_dim(2, rho.dim())?;
    let component = |axis| (pauli(axis).matrix() * rho.matrix()).trace().re;
    Ok([component(PauliAxis::X), component(PauliAxis::Y), component(PauliAxis::Z)])
}

/// `rho = (I + v . sigma) / 2`, requiring `|v| <= 1`.
pub fn bloch_to_density(v: [f64; 3]) -> Result<DensityMatrix> {
    let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(len <= 1.0 + Tolerances::default().norm) {
        return Err(QdynError::InvalidArgument(format!("Bloch vector length {len} exceeds 1")));
    }
    let mut m: CMatrix = linalg::identity(2);
    for (axis, x) in [PauliAxis::X, PauliAxis::Y, PauliAxis::Z].into_iter().zip(v) {
        m += pauli(axis).matrix() * linalg::r(x);
    }
    DensityMatrix::new(m * linalg::r(0.5))
}

/// `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>` for `theta in [0, pi]`, `phi in [0, 2 pi)`.
pub fn pure_angles_to_state(theta: f64, phi: f64) -> Result<StateVector> {
    if !(0.0..=PI).contains(&theta) {
        return Err(QdynError::InvalidArgument(format!("polar angle {theta} outside [0, pi]")));
    }
    if !(0.0..2.0 * PI).contains(&phi) {
        return Err(QdynError::InvalidArgument(format!("azimuth {phi} outside [0, 2 pi)")));
    }
    let amps = CVector::from_vec(vec![
        linalg::r((theta / 2.0).cos()),
        num_complex::Complex64::from_polar((theta / 2.0).sin(), phi),
    ]);
    StateVector::new(amps)
}

/// True iff `|<psi, phi>| >= 1 - tol`, i.e. the states differ at most by a global phase.
pub fn global_phase_equivalent(psi: &StateVector, phi: &StateVector, tol: f64) -> Result<bool> {
    Ok(psi.inner(phi)?.norm() >= 1.0 - tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, r};

    #[test]
    fn centre_and_pole() {
        let v = bloch_vector(&DensityMatrix::maximally_mixed(2).unwrap()).unwrap();
        assert!(v.iter().all(|x| x.abs() < 1e-15));
        let ground = DensityMatrix::new(CMatrix::from_row_slice(2, 2, &[r(1.0), r(0.0), r(0.0), r(0.0)])).unwrap();
        assert_eq!(bloch_vector(&ground).unwrap(), [0.0, 0.0, 1.0]);
        assert!(bloch_vector(&DensityMatrix::maximally_mixed(3).unwrap()).is_err());
    }

    #[test]
    fn unit_vector_is_pure() {
        let n = 3f64.sqrt();
        let rho = bloch_to_density([1.0 / n, -1.0 / n, 1.0 / n]).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-14);
        assert!(bloch_to_density([0.8, 0.7, 0.0]).is_err());
    }

    #[test]
    fn angles_map_to_expected_states() {
        let north = pure_angles_to_state(0.0, 0.3).unwrap();
        assert!((north.amplitudes()[0] - r(1.0)).norm() < 1e-15);
        let south = pure_angles_to_state(PI, 1.0).unwrap();
        let one = StateVector::from_parts(&[(0.0, 0.0), (1.0, 0.0)]).unwrap();
        assert!(global_phase_equivalent(&south, &one, 1e-12).unwrap());
        let plus = pure_angles_to_state(PI / 2.0, 0.0).unwrap();
        let v = bloch_vector(&DensityMatrix::from_pure(&plus)).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-15 && v[1].abs() < 1e-15 && v[2].abs() < 1e-15);
        assert!(pure_angles_to_state(-0.1, 0.0).is_err());
        assert!(pure_angles_to_state(1.0, 2.0 * PI).is_err());
    }

    #[test]
    fn angles_give_spherical_bloch_vector() {
        for &(theta, phi) in &[(0.3, 0.2), (1.2, 4.0), (2.9, 6.0)] {
            let psi = pure_angles_to_state(theta, phi).unwrap();
            let v = bloch_vector(&DensityMatrix::from_pure(&psi)).unwrap();
            let want = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
            for k in 0..3 {
                assert!((v[k] - want[k]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn phase_equivalence() {
        let psi = StateVector::from_parts(&[(0.6, 0.0), (0.0, 0.8)]).unwrap();
        assert!(global_phase_equivalent(&psi, &psi.with_global_phase(1.3), 1e-12).unwrap());
        let zero = StateVector::from_parts(&[(1.0, 0.0), (0.0, 0.0)]).unwrap();
        let one = StateVector::from_parts(&[(0.0, 0.0), (1.0, 0.0)]).unwrap();
        assert!(!global_phase_equivalent(&zero, &one, 1e-12).unwrap());
        let s = 0.5f64.sqrt();
        let plus = StateVector::from_parts(&[(s, 0.0), (s, 0.0)]).unwrap();
        let minus = StateVector::from_parts(&[(s, 0.0), (-s, 0.0)]).unwrap();
        assert!(!global_phase_equivalent(&plus, &minus, 1e-12).unwrap());
    }

    #[test]
    fn round_trip_through_density() {
        let v = [0.1, -0.4, 0.5];
        let rho = bloch_to_density(v).unwrap();
        let back = bloch_vector(&rho).unwrap();
        for k in 0..3 {
            assert!((back[k] - v[k]).abs() < 1e-15);
        }
        let rebuilt = bloch_to_density(back).unwrap();
        assert!(max_abs_diff(rebuilt.matrix(), rho.matrix()) < 1e-15);
    }
}
