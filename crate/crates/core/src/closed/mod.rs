//! Closed-system time evolution.

mod diagnostics;
mod frame;
mod hamiltonian;
mod integrator;
mod rabi;

pub use diagnostics::{ehrenfest_residual, trace_fidelity};
pub use frame::{
    anharmonic_drift, exact_rot_control, number_frame, quadrature_control, rotating_frame_hamiltonian,
    rwa_error_bound_general, rwa_error_bound_qubit, rwa_error_bound_simple, rwa_hamiltonian, Envelope, RwaConfig,
    SimpleBound, SupNorms,
};
pub use hamiltonian::{TimeDependentHamiltonian, Trajectory};
pub(crate) use integrator::grid;
pub use integrator::{evolve, implicit_midpoint_step, propagator};
pub use rabi::{control_amplitudes, pi_half_pulse, pi_pulse, rabi_period, rabi_propagator, RabiParams};
