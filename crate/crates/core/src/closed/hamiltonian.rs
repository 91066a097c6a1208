use std::fmt;
use std::sync::Arc;

use crate::error::{QdynError, Result};
use crate::linalg;
use crate::quantum::{Operator, OperatorKind, Tolerances};

type Evaluator = dyn Fn(f64) -> Result<Operator> + Send + Sync;

/// Hermitian-valued function of time with a fixed dimension.
///
/// The evaluator is shared behind an `Arc` and must be callable from several
/// threads at once. Every evaluation is checked for dimension and Hermiticity.
#[derive(Clone)]
pub struct TimeDependentHamiltonian {
    dim: usize,
    label: String,
    hermitian_tol: f64,
    evaluator: Arc<Evaluator>,
}

impl TimeDependentHamiltonian {
    pub fn new<F>(dim: usize, label: impl Into<String>, evaluator: F) -> Self
    where
        F: Fn(f64) -> Result<Operator> + Send + Sync + 'static,
    {
        Self {
            dim,
            label: label.into(),
            hermitian_tol: Tolerances::default().hermitian,
            evaluator: Arc::new(evaluator),
        }
    }

    /// Time-independent Hamiltonian.
    pub fn constant(h: Operator) -> Result<Self> {
        let h = Operator::hermitian(h.into_matrix())?;
        let dim = h.dim();
        Ok(Self::new(dim, "constant", move |_| Ok(h.clone())))
    }

    /// The zero Hamiltonian on dimension `d`.
    pub fn zero(d: usize) -> Self {
        Self::new(d, "zero", move |_| Ok(Operator::zeros(d)))
    }

    pub fn with_hermitian_tolerance(mut self, tol: f64) -> Self {
        self.hermitian_tol = tol;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn evaluate(&self, t: f64) -> Result<Operator> {
        let h = (self.evaluator)(t)?;
        linalg::check_same_dim(self.dim, h.dim())?;
        let deviation = linalg::hermiticity_residual(h.matrix());
        if !(deviation <= self.hermitian_tol) {
            return Err(QdynError::NotHermitian { deviation });
        }
        Ok(Operator::from_raw(h.into_matrix(), OperatorKind::Hermitian))
    }

    /// Pointwise sum `H(t) + K(t)`.
    pub fn plus(&self, other: &TimeDependentHamiltonian) -> Result<TimeDependentHamiltonian> {
        linalg::check_same_dim(self.dim, other.dim)?;
        let (a, b) = (self.clone(), other.clone());
        let label = format!("{} + {}", self.label, other.label);
        Ok(Self::new(self.dim, label, move |t| a.evaluate(t)?.add(&b.evaluate(t)?))
            .with_hermitian_tolerance(self.hermitian_tol.max(other.hermitian_tol)))
    }
}

impl fmt::Debug for TimeDependentHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TimeDependentHamiltonian")
            .field("dim", &self.dim)
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

/// States sampled on a strictly increasing time grid.
#[derive(Debug, Clone)]
pub struct Trajectory<S> {
    times: Vec<f64>,
    states: Vec<S>,
}

impl<S> Trajectory<S> {
    pub fn new(times: Vec<f64>, states: Vec<S>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(QdynError::DimensionMismatch { expected: times.len(), found: states.len() });
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(QdynError::InvalidArgument("trajectory times must be strictly increasing".into()));
        }
        Ok(Self { times, states })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&S> {
        self.states.last()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &S)> {
        self.times.iter().copied().zip(self.states.iter())
    }
}
