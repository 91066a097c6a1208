//! Constant-drive two-level system in the rotating frame: `H_c = Omega a + conj(Omega) a^dag`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{QdynError, Result};
use crate::linalg::{self, CMatrix};
use crate::quantum::{lowering, Operator, OperatorKind};

use super::{quadrature_control, TimeDependentHamiltonian};

/// Complex drive amplitude `Omega = |Omega| e^{i theta}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiParams {
    omega: Complex64,
}

impl RabiParams {
    pub fn new(omega: Complex64) -> Result<Self> {
        if omega.norm() == 0.0 || !omega.is_finite() {
            return Err(QdynError::InvalidArgument(format!("drive amplitude must be nonzero, got {omega}")));
        }
        Ok(Self { omega })
    }

    pub fn from_polar(abs: f64, theta: f64) -> Result<Self> {
        Self::new(Complex64::from_polar(abs, theta))
    }

    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    pub fn abs(&self) -> f64 {
        self.omega.norm()
    }

    /// Phase angle in `(-pi, pi]`.
    pub fn theta(&self) -> f64 {
        self.omega.arg()
    }

    /// `(cos theta, sin theta)` computed without going through the angle.
    fn direction(&self) -> (f64, f64) {
        let a = self.abs();
        (self.omega.re / a, self.omega.im / a)
    }

    /// `Omega a + conj(Omega) a^dag` on a qubit.
    pub fn hamiltonian(&self) -> Operator {
        let a = lowering(2).expect("qubit ladder").into_matrix();
        let m: CMatrix = &a * self.omega + a.adjoint() * self.omega.conj();
        Operator::from_raw(m, OperatorKind::Hermitian)
    }

    pub fn time_dependent(&self) -> TimeDependentHamiltonian {
        let h = self.hamiltonian();
        TimeDependentHamiltonian::new(2, format!("rabi({})", self.omega), move |_| Ok(h.clone()))
    }
}

/// Analytic solution operator
/// `[[cos(|W|t), (sin th - i cos th) sin(|W|t)], [-(sin th + i cos th) sin(|W|t), cos(|W|t)]]`.
pub fn rabi_propagator(params: &RabiParams, t: f64) -> Operator {
    let (cos_th, sin_th) = params.direction();
    let (sn, cs) = (params.abs() * t).sin_cos();
    let upper = Complex64::new(sin_th, -cos_th) * sn;
    let lower = -Complex64::new(sin_th, cos_th) * sn;
    let m = CMatrix::from_row_slice(2, 2, &[linalg::r(cs), upper, lower, linalg::r(cs)]);
    Operator::from_raw(m, OperatorKind::Unitary)
}

fn check_amplitude(omega_abs: f64) -> Result<()> {
    if !(omega_abs > 0.0 && omega_abs.is_finite()) {
        return Err(QdynError::InvalidArgument(format!("drive amplitude must be positive, got {omega_abs}")));
    }
    Ok(())
}

/// Population oscillation period `pi / |Omega|`.
pub fn rabi_period(omega_abs: f64) -> Result<f64> {
    check_amplitude(omega_abs)?;
    Ok(PI / omega_abs)
}

/// Half a Rabi period, swapping `|0>` and `|1>`.
pub fn pi_pulse(omega_abs: f64) -> Result<f64> {
    check_amplitude(omega_abs)?;
    Ok(PI / (2.0 * omega_abs))
}

/// Quarter period, taking a pole to the equator.
pub fn pi_half_pulse(omega_abs: f64) -> Result<f64> {
    check_amplitude(omega_abs)?;
    Ok(PI / (4.0 * omega_abs))
}

/// `(p0, q0) = (|Omega| cos theta, |Omega| sin theta)`, so that
/// `H_c = p0 (a + a^dag) + i q0 (a - a^dag)`.
pub fn control_amplitudes(params: &RabiParams) -> (f64, f64) {
    (params.omega.re, params.omega.im)
}

impl RabiParams {
    /// Quadrature form of [`RabiParams::hamiltonian`].
    pub fn quadrature_hamiltonian(&self) -> Operator {
        let (p0, q0) = control_amplitudes(self);
        quadrature_control(p0, q0, 2).expect("qubit control")
    }
}
