use std::fmt;

use crate::error::{QdynError, Result};
use crate::linalg::{self, CVector, ONE};

use super::Tolerances;

/// Ordered subsystem dimensions of a composite Hilbert space.
///
/// The first entry is the leftmost (most significant) Kronecker factor, so the
/// label `|01>` over `[2, 2]` is `|0>_A (x) |1>_B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompositeDims(Vec<usize>);

impl CompositeDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(QdynError::InvalidArgument("subsystem dimension list is empty".into()));
        }
        if let Some(&bad) = dims.iter().find(|&&d| d < 2) {
            return Err(QdynError::DimensionTooSmall { min: 2, found: bad });
        }
        Ok(Self(dims))
    }

    pub fn bipartite(d_a: usize, d_b: usize) -> Result<Self> {
        Self::new(vec![d_a, d_b])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    /// Returns `(d_A, d_B)` or an error when there are not exactly two factors.
    pub fn split(&self) -> Result<(usize, usize)> {
        match self.0.as_slice() {
            [a, b] => Ok((*a, *b)),
            other => Err(QdynError::NotBipartite(other.len())),
        }
    }

    /// Errors unless the product of the factors equals `total`.
    pub fn check_total(&self, total: usize) -> Result<()> {
        if self.total() != total {
            return Err(QdynError::InvalidDims { dims: self.0.clone(), total });
        }
        Ok(())
    }

    pub fn concat(&self, other: &CompositeDims) -> CompositeDims {
        let mut dims = self.0.clone();
        dims.extend_from_slice(&other.0);
        CompositeDims(dims)
    }
}

impl fmt::Display for CompositeDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join("x"))
    }
}

/// Unit-norm complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
    dims: Option<CompositeDims>,
}

impl StateVector {
    /// Validates the norm at the default tolerance.
    pub fn new(amplitudes: CVector) -> Result<Self> {
        Self::with_tolerance(amplitudes, Tolerances::default().norm)
    }

    pub fn with_tolerance(amplitudes: CVector, norm_tol: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(QdynError::DimensionTooSmall { min: 1, found: 0 });
        }
        let norm = amplitudes.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > norm_tol {
            return Err(QdynError::NotNormalized { norm });
        }
        Ok(Self { amplitudes, dims: None })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(QdynError::NotNormalized { norm });
        }
        Self::new(amplitudes / linalg::r(norm))
    }

    /// Builds a state from raw `(re, im)` parts without requiring nalgebra types.
    pub fn from_parts(parts: &[(f64, f64)]) -> Result<Self> {
        Self::new(CVector::from_iterator(parts.len(), parts.iter().map(|&(re, im)| linalg::c(re, im))))
    }

    pub(crate) fn from_raw(amplitudes: CVector, dims: Option<CompositeDims>) -> Self {
        Self { amplitudes, dims }
    }

    pub fn with_dims(mut self, dims: CompositeDims) -> Result<Self> {
        dims.check_total(self.dim())?;
        self.dims = Some(dims);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn dims(&self) -> Option<&CompositeDims> {
        self.dims.as_ref()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `<self, other> = self^dag other`.
    pub fn inner(&self, other: &StateVector) -> Result<num_complex::Complex64> {
        linalg::check_same_dim(self.dim(), other.dim())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Tensor product; subsystem dims are concatenated when both sides carry them,
    /// otherwise the factor dimensions themselves are used.
    pub fn kron(&self, other: &StateVector) -> StateVector {
        let left = self.dims.clone().unwrap_or_else(|| CompositeDims(vec![self.dim()]));
        let right = other.dims.clone().unwrap_or_else(|| CompositeDims(vec![other.dim()]));
        let dims = if left.as_slice().iter().chain(right.as_slice()).all(|&d| d >= 2) {
            Some(left.concat(&right))
        } else {
            None
        };
        StateVector::from_raw(linalg::kron_vec(&self.amplitudes, &other.amplitudes), dims)
    }

    /// Multiplies every amplitude by `e^{i phase}`.
    pub fn with_global_phase(&self, phase: f64) -> StateVector {
        let factor = num_complex::Complex64::from_polar(1.0, phase);
        StateVector::from_raw(&self.amplitudes * factor, self.dims.clone())
    }

    /// Probabilities `|psi_k|^2` in the computational basis.
    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }
}

/// Basis vector `|l_1 l_2 ... l_n>` in the composite space `dims`.
///
/// The flat index is `sum_j l_j * prod_{k>j} d_k`.
pub fn basis_ket(labels: &[usize], dims: &CompositeDims) -> Result<StateVector> {
    if labels.len() != dims.len() {
        return Err(QdynError::DimensionMismatch { expected: dims.len(), found: labels.len() });
    }
    let mut index = 0usize;
    for (j, (&label, &d)) in labels.iter().zip(dims.as_slice()).enumerate() {
        if label >= d {
            return Err(QdynError::LabelOutOfRange { index: j, label, dim: d });
        }
        index = index * d + label;
    }
    let mut amps = CVector::zeros(dims.total());
    amps[index] = ONE;
    Ok(StateVector::from_raw(amps, Some(dims.clone())))
}
