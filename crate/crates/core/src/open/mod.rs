//! Open-system evolution and diagnostics on reduced states.

mod entanglement;
mod fidelity;
mod kraus;
mod lindblad;
mod partial;
mod superop;

pub use entanglement::{
    concurrence_pure, expectation_on_subsystem, is_factorized, is_maximally_entangled, is_maximally_mixed, is_pure,
    ppt_test, purity, MaxEntanglement, PptResult, PptVerdict, NPT_THRESHOLD, PURITY_TOL,
};
pub use fidelity::{fidelity, fidelity_pure, fidelity_pure_pure, psd_sqrt};
pub use kraus::{apply_kraus, kraus_from_joint_unitary, BathSpectral, KrausSet};
pub use lindblad::{evolve_lindblad, lindblad_dissipator, lindblad_rhs, lvn_rhs, CollapseOperator, LindbladModel};
pub use partial::{partial_trace, partial_transpose, reduced_density, Subsystem};
pub use superop::{devectorize, lindblad_superoperator, lvn_superoperator, vectorize};
