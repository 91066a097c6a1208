use log::warn;

use crate::error::{QdynError, Result};
use crate::linalg::{self, I};
use crate::measurement::{expectation, Observable};
use crate::quantum::{Operator, StateVector};

use super::{TimeDependentHamiltonian, Trajectory};

/// Max over interior grid points of `|D<A> - <[A, H]/i>|`, where `D` is the
/// centered difference of `<A>` along the trajectory.
pub fn ehrenfest_residual(a: &Observable, h: &TimeDependentHamiltonian, traj: &Trajectory<StateVector>) -> Result<f64> {
    if traj.len() < 3 {
        return Err(QdynError::InvalidArgument(format!(
            "Ehrenfest residual needs at least 3 grid points, got {}",
            traj.len()
        )));
    }
    linalg::check_same_dim(a.dim(), h.dim())?;
    let values: Vec<f64> = traj.states().iter().map(|psi| expectation(a, psi)).collect::<Result<_>>()?;
    let times = traj.times();
    let mut worst = 0.0f64;
    for j in 1..traj.len() - 1 {
        let slope = (values[j + 1] - values[j - 1]) / (times[j + 1] - times[j - 1]);
        let hm = h.evaluate(times[j])?;
        let am = a.operator().matrix();
        // [A, H] / i = -i [A, H], which is Hermitian.
        let gen = (am * hm.matrix() - hm.matrix() * am) * (-I);
        let psi = traj.states()[j].amplitudes();
        let rate = psi.dotc(&(gen * psi)).re;
        worst = worst.max((slope - rate).abs());
    }
    Ok(worst)
}

/// `|Tr(U^dag V)|^2 / d^2`, invariant under a global phase on either argument.
///
/// Non-unitary inputs are still evaluated, with a warning.
pub fn trace_fidelity(u: &Operator, v: &Operator) -> Result<f64> {
    linalg::check_same_dim(u.dim(), v.dim())?;
    for (name, op) in [("first", u), ("second", v)] {
        let deviation = linalg::unitarity_residual(op.matrix());
        if deviation > 1e-9 {
            warn!("trace fidelity: {name} argument is not unitary (deviation {deviation:e})");
        }
    }
    let d = u.dim() as f64;
    let overlap: num_complex::Complex64 = u.matrix().iter().zip(v.matrix().iter()).map(|(x, y)| x.conj() * y).sum();
    Ok(overlap.norm_sqr() / (d * d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed::evolve;
    use crate::linalg::r;
    use crate::quantum::{pauli, PauliAxis};

    #[test]
    fn trace_fidelity_examples() {
        let x = pauli(PauliAxis::X);
        assert!((trace_fidelity(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(trace_fidelity(&Operator::identity(2), &x).unwrap(), 0.0);
        let phased = x.scale(num_complex::Complex64::from_polar(1.0, 0.7));
        assert!(
            (trace_fidelity(&Operator::identity(2), &phased).unwrap()
                - trace_fidelity(&Operator::identity(2), &x).unwrap())
            .abs()
                < 1e-15
        );
        assert!(trace_fidelity(&x, &Operator::identity(3)).is_err());
    }

    #[test]
    fn conserved_quantities_have_zero_residual() {
        let h = TimeDependentHamiltonian::constant(pauli(PauliAxis::X).scale(r(0.7))).unwrap();
        let psi = StateVector::from_parts(&[(0.6, 0.0), (0.0, 0.8)]).unwrap();
        let traj = evolve(&h, &psi, 0.0, 3.0, 300).unwrap();
        let a = Observable::new(pauli(PauliAxis::X)).unwrap();
        assert!(ehrenfest_residual(&a, &h, &traj).unwrap() <= 1e-8);
        let id = Observable::new(Operator::identity(2)).unwrap();
        assert!(ehrenfest_residual(&id, &h, &traj).unwrap() <= 1e-12);
    }

    #[test]
    fn short_trajectory_is_rejected() {
        let h = TimeDependentHamiltonian::zero(2);
        let psi = StateVector::from_parts(&[(1.0, 0.0), (0.0, 0.0)]).unwrap();
        let traj = evolve(&h, &psi, 0.0, 1.0, 1).unwrap();
        let a = Observable::new(pauli(PauliAxis::Z)).unwrap();
        assert!(ehrenfest_residual(&a, &h, &traj).is_err());
    }
}
