//! State and operator types with their standard constructors.

mod bloch;
mod density;
mod operator;
mod state;

pub use bloch::{bloch_to_density, bloch_vector, global_phase_equivalent, pure_angles_to_state};
pub use density::{density_from_ensemble, DensityMatrix, PureStateEnsemble};
pub use operator::{
    anticommutator, commutator, hs_inner, kron, lowering, number, outer_product, pauli, raising, Operator,
    OperatorKind, PauliAxis,
};
pub use state::{basis_ket, CompositeDims, StateVector};

/// Validation thresholds applied when constructing checked values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// `| ||psi|| - 1 |` allowed for state vectors.
    pub norm: f64,
    /// `max |A - A^dag|` allowed for Hermitian matrices.
    pub hermitian: f64,
    /// `|Tr rho - 1|` allowed for density matrices.
    pub trace: f64,
    /// Most negative eigenvalue accepted as numerically zero.
    pub psd_floor: f64,
    /// `max |U^dag U - I|` allowed for unitaries.
    pub unitary: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { norm: 1e-10, hermitian: 1e-10, trace: 1e-10, psd_floor: 1e-9, unitary: 1e-9 }
    }
}
