//! Measurement of state vectors and density matrices.
//!
//! A [`MeasurementSet`] is a list of operators `M_k` with `sum_k M_k^dag M_k = I`.
//! Outcome `k` occurs with probability `||M_k psi||^2` (or `Tr(M_k^dag M_k rho)`)
//! and leaves the system in `M_k psi / sqrt(p_k)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{QdynError, Result};
use crate::linalg::{self, CMatrix, HermitianEigen};
use crate::quantum::{DensityMatrix, Operator, OperatorKind, StateVector, Tolerances};

/// Completeness tolerance for `sum_k M_k^dag M_k = I`.
pub const COMPLETENESS_TOL: f64 = 1e-9;

/// Probabilities at or below this value cannot be renormalized after collapse.
pub const COLLAPSE_FLOOR: f64 = 1e-12;

/// Measurement operators satisfying the completeness relation.
#[derive(Debug, Clone)]
pub struct MeasurementSet {
    operators: Vec<Operator>,
}

impl MeasurementSet {
    pub fn new(operators: Vec<Operator>) -> Result<Self> {
        validate_measurement_set(operators)
    }

    /// Rank-one projectors onto the computational basis of dimension `d`.
    pub fn computational(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(QdynError::DimensionTooSmall { min: 1, found: 0 });
        }
        let ops = (0..d)
            .map(|k| {
                let mut m = CMatrix::zeros(d, d);
                m[(k, k)] = linalg::ONE;
                Operator::from_raw(m, OperatorKind::Hermitian)
            })
            .collect();
        Ok(Self { operators: ops })
    }

    pub fn operators(&self) -> &[Operator] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.operators[0].dim()
    }
}

/// Checks that the operators share one dimension and satisfy completeness.
pub fn validate_measurement_set(operators: Vec<Operator>) -> Result<MeasurementSet> {
    let Some(first) = operators.first() else {
        return Err(QdynError::InvalidArgument("measurement set is empty".into()));
    };
    let d = first.dim();
    let mut sum = CMatrix::zeros(d, d);
    for m in &operators {
        linalg::check_same_dim(d, m.dim())?;
        sum += m.matrix().adjoint() * m.matrix();
    }
    let deviation = linalg::max_abs_diff(&sum, &linalg::identity(d));
    if !(deviation <= COMPLETENESS_TOL) {
        return Err(QdynError::Incomplete { deviation });
    }
    Ok(MeasurementSet { operators })
}

/// `p_k = ||M_k psi||^2`.
pub fn outcome_probabilities(ms: &MeasurementSet, psi: &StateVector) -> Result<Vec<f64>> {
    linalg::check_same_dim(ms.dim(), psi.dim())?;
    Ok(ms.operators.iter().map(|m| (m.matrix() * psi.amplitudes()).norm_squared()).collect())
}

/// Post-measurement state `M_k psi / sqrt(p_k)`.
pub fn collapse_state(ms: &MeasurementSet, psi: &StateVector, k: usize) -> Result<StateVector> {
    collapse_state_with_floor(ms, psi, k, COLLAPSE_FLOOR)
}

pub fn collapse_state_with_floor(ms: &MeasurementSet, psi: &StateVector, k: usize, floor: f64) -> Result<StateVector> {
    linalg::check_same_dim(ms.dim(), psi.dim())?;
    let m = ms.operators.get(k).ok_or(QdynError::OutcomeOutOfRange { outcome: k, count: ms.len() })?;
    let out = m.matrix() * psi.amplitudes();
    let probability = out.norm_squared();
    if !(probability > floor) {
        return Err(QdynError::ZeroProbabilityOutcome { outcome: k, probability });
    }
    let collapsed = out / linalg::r(probability.sqrt());
    Ok(StateVector::from_raw(collapsed, psi.dims().cloned()))
}

/// `p_k = Tr(M_k^dag M_k rho)`.
pub fn density_outcome_probabilities(ms: &MeasurementSet, rho: &DensityMatrix) -> Result<Vec<f64>> {
    linalg::check_same_dim(ms.dim(), rho.dim())?;
    Ok(ms.operators.iter().map(|m| linalg::trace(&(m.matrix().adjoint() * m.matrix() * rho.matrix())).re).collect())
}

/// Post-measurement density `M_k rho M_k^dag / p_k`.
pub fn density_collapse(ms: &MeasurementSet, rho: &DensityMatrix, k: usize) -> Result<DensityMatrix> {
    linalg::check_same_dim(ms.dim(), rho.dim())?;
    let m = ms.operators.get(k).ok_or(QdynError::OutcomeOutOfRange { outcome: k, count: ms.len() })?;
    let unnormalized = m.matrix() * rho.matrix() * m.matrix().adjoint();
    let probability = linalg::trace(&unnormalized).re;
    if !(probability > COLLAPSE_FLOOR) {
        return Err(QdynError::ZeroProbabilityOutcome { outcome: k, probability });
    }
    let out = DensityMatrix::new(unnormalized / linalg::r(probability))?;
    match rho.dims() {
        Some(dims) => out.with_dims(dims.clone()),
        None => Ok(out),
    }
}

/// Positive operator valued measure: Hermitian PSD elements summing to the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<Operator>,
}

impl Povm {
    pub fn new(elements: Vec<Operator>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(QdynError::InvalidArgument("POVM is empty".into()));
        };
        let d = first.dim();
        let tol = Tolerances::default();
        let mut sum = CMatrix::zeros(d, d);
        let mut checked = Vec::with_capacity(elements.len());
        for f in elements {
            linalg::check_same_dim(d, f.dim())?;
            let f = Operator::hermitian_with_tolerance(f.into_matrix(), tol.hermitian)?;
            let min_eigenvalue = linalg::min_eigenvalue(f.matrix());
            if min_eigenvalue < -tol.psd_floor {
                return Err(QdynError::NotPositive { min_eigenvalue });
            }
            sum += f.matrix();
            checked.push(f);
        }
        let deviation = linalg::max_abs_diff(&sum, &linalg::identity(d));
        if !(deviation <= COMPLETENESS_TOL) {
            return Err(QdynError::Incomplete { deviation });
        }
        Ok(Self { elements: checked })
    }

    pub fn elements(&self) -> &[Operator] {
        &self.elements
    }

    /// `p_k = <psi, F_k psi>`.
    pub fn probabilities(&self, psi: &StateVector) -> Result<Vec<f64>> {
        linalg::check_same_dim(self.elements[0].dim(), psi.dim())?;
        Ok(self.elements.iter().map(|f| psi.amplitudes().dotc(&(f.matrix() * psi.amplitudes())).re).collect())
    }
}

/// `F_k = M_k^dag M_k`.
pub fn povm_from(ms: &MeasurementSet) -> Povm {
    let elements = ms
        .operators
        .iter()
        .map(|m| {
            let f = m.matrix().adjoint() * m.matrix();
            Operator::from_raw(linalg::hermitian_part(&f), OperatorKind::Hermitian)
        })
        .collect();
    Povm { elements }
}

/// Hermitian operator together with its spectral decomposition.
///
/// Eigenvalues are ascending. Eigenvectors are orthonormal with the first
/// significant component made real positive, so degenerate eigenspaces get a
/// reproducible basis.
#[derive(Debug, Clone)]
pub struct Observable {
    operator: Operator,
    spectrum: HermitianEigen,
}

impl Observable {
    pub fn new(operator: Operator) -> Result<Self> {
        let operator = Operator::hermitian(operator.into_matrix())?;
        let spectrum = linalg::eigh(operator.matrix());
        Ok(Self { operator, spectrum })
    }

    pub fn operator(&self) -> &Operator {
        &self.operator
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    /// Eigenvectors as columns, aligned with [`Observable::eigenvalues`].
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.spectrum.eigenvectors
    }
}

/// One rank-one projector per eigenvector, with the matching eigenvalues.
pub fn projective_from_observable(a: &Observable) -> (MeasurementSet, Vec<f64>) {
    let vecs = a.eigenvectors();
    let projectors = (0..a.dim())
        .map(|k| {
            let col = vecs.column(k).into_owned();
            Operator::from_raw(linalg::outer(&col, &col), OperatorKind::Hermitian)
        })
        .collect();
    (MeasurementSet { operators: projectors }, a.eigenvalues().to_vec())
}

/// `<A> = psi^dag A psi`.
pub fn expectation(a: &Observable, psi: &StateVector) -> Result<f64> {
    linalg::check_same_dim(a.dim(), psi.dim())?;
    Ok(psi.amplitudes().dotc(&(a.operator.matrix() * psi.amplitudes())).re)
}

/// `<A> = Tr(A rho)`.
pub fn expectation_density(a: &Observable, rho: &DensityMatrix) -> Result<f64> {
    linalg::check_same_dim(a.dim(), rho.dim())?;
    Ok(linalg::trace(&(a.operator.matrix() * rho.matrix())).re)
}

/// Radicands in `[-1e-12, 0)` are treated as round-off and clamped to zero.
const VARIANCE_FLOOR: f64 = -1e-12;

/// `Delta A = sqrt(<A^2> - <A>^2)`.
///
/// The returned value is evaluated as `||(A - <A>) psi||`, which is the same
/// quantity without the cancellation; the radicand is still checked.
pub fn std_dev(a: &Observable, psi: &StateVector) -> Result<f64> {
    linalg::check_same_dim(a.dim(), psi.dim())?;
    let a_psi = a.operator.matrix() * psi.amplitudes();
    let mean = psi.amplitudes().dotc(&a_psi).re;
    let second = a_psi.norm_squared();
    let variance = second - mean * mean;
    if variance < VARIANCE_FLOOR {
        return Err(QdynError::NegativeVariance(variance));
    }
    let centered = a_psi - psi.amplitudes() * linalg::r(mean);
    Ok(centered.norm())
}

/// Measurement without recording the outcome: `rho -> sum_k M_k rho M_k^dag`.
pub fn nonselective_channel(ms: &MeasurementSet, rho: &DensityMatrix) -> Result<DensityMatrix> {
    linalg::check_same_dim(ms.dim(), rho.dim())?;
    let d = rho.dim();
    let mut out = CMatrix::zeros(d, d);
    for m in &ms.operators {
        out += m.matrix() * rho.matrix() * m.matrix().adjoint();
    }
    let out = DensityMatrix::new(out)?;
    match rho.dims() {
        Some(dims) => out.with_dims(dims.clone()),
        None => Ok(out),
    }
}

/// Draws one outcome index by inverse CDF on a ChaCha8 stream seeded with `seed`.
pub fn sample_outcome(ms: &MeasurementSet, psi: &StateVector, seed: u64) -> Result<usize> {
    Ok(sample_outcomes(ms, psi, seed, 1)?[0])
}

/// Draws `count` independent outcomes from a single seeded stream.
pub fn sample_outcomes(ms: &MeasurementSet, psi: &StateVector, seed: u64, count: usize) -> Result<Vec<usize>> {
    let probs = outcome_probabilities(ms, psi)?;
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in &probs {
        acc += p.max(0.0);
        cdf.push(acc);
    }
    let total = acc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let u: f64 = rng.random::<f64>() * total;
            // Outcomes with zero probability are never selected: their CDF step is empty.
            cdf.iter().position(|&c| u < c).unwrap_or_else(|| probs.iter().rposition(|&p| p > 0.0).unwrap_or(0))
        })
        .collect())
}
