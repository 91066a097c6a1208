//! Rotating frames and the rotating wave approximation with its error bounds.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{QdynError, Result};
use crate::linalg::{self, CMatrix, CVector, I};
use crate::quantum::{lowering, number, raising, Operator, OperatorKind, Tolerances};

use super::TimeDependentHamiltonian;

/// Hermiticity tolerance for frame-transformed Hamiltonians.
const FRAME_HERMITIAN_TOL: f64 = 1e-9;

/// Transformed Hamiltonian `R H R^dag + i R' R^dag` for the substitution `psi~ = R(t) psi`.
///
/// `frame` must be unitary at every evaluated time; this is checked on each call.
pub fn rotating_frame_hamiltonian<R, Rd>(
    h: &TimeDependentHamiltonian,
    frame: R,
    frame_rate: Rd,
) -> TimeDependentHamiltonian
where
    R: Fn(f64) -> Operator + Send + Sync + 'static,
    Rd: Fn(f64) -> Operator + Send + Sync + 'static,
{
    let inner = h.clone();
    let dim = h.dim();
    let label = format!("rotating frame of {}", h.label());
    TimeDependentHamiltonian::new(dim, label, move |t| {
        let r = frame(t);
        linalg::check_same_dim(dim, r.dim())?;
        let deviation = linalg::unitarity_residual(r.matrix());
        if !(deviation <= Tolerances::default().unitary) {
            return Err(QdynError::NotUnitary { deviation });
        }
        let rdot = frame_rate(t);
        linalg::check_same_dim(dim, rdot.dim())?;
        let r_dag = r.matrix().adjoint();
        let h_t = inner.evaluate(t)?;
        let out = r.matrix() * h_t.matrix() * &r_dag + rdot.matrix() * &r_dag * I;
        Ok(Operator::from_raw(out, OperatorKind::General))
    })
    .with_hermitian_tolerance(FRAME_HERMITIAN_TOL)
}

/// The frame `R(t) = exp(i omega N t)` and its derivative `i omega N R(t)`.
pub fn number_frame(
    d: usize,
    omega: f64,
) -> Result<(impl Fn(f64) -> Operator + Send + Sync + Clone, impl Fn(f64) -> Operator + Send + Sync + Clone)> {
    // Validates d >= 2.
    number(d)?;
    let frame = move |t: f64| {
        let diag = CVector::from_iterator(d, (0..d).map(|k| Complex64::from_polar(1.0, omega * k as f64 * t)));
        Operator::from_raw(CMatrix::from_diagonal(&diag), OperatorKind::Unitary)
    };
    let rate = move |t: f64| {
        let diag = CVector::from_iterator(
            d,
            (0..d).map(|k| I * (omega * k as f64) * Complex64::from_polar(1.0, omega * k as f64 * t)),
        );
        Operator::from_raw(CMatrix::from_diagonal(&diag), OperatorKind::General)
    };
    Ok((frame, rate))
}

/// Real-valued control envelope `t -> p(t)`.
pub type Envelope = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Sup norms of the control envelopes over the time window of interest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupNorms {
    /// `||g||_inf` with `g = p + i q`.
    pub g: f64,
    /// `||g'||_inf`.
    pub g_prime: f64,
    pub p: f64,
    pub q: f64,
}

/// Parameters of an RWA study.
#[derive(Clone)]
pub struct RwaConfig {
    pub omega_a: f64,
    pub xi_a: f64,
    pub d: usize,
    pub p: Envelope,
    pub q: Envelope,
    pub sup: SupNorms,
}

impl std::fmt::Debug for RwaConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RwaConfig")
            .field("omega_a", &self.omega_a)
            .field("xi_a", &self.xi_a)
            .field("d", &self.d)
            .field("sup", &self.sup)
            .finish_non_exhaustive()
    }
}

impl RwaConfig {
    pub fn new(omega_a: f64, xi_a: f64, d: usize, p: Envelope, q: Envelope, sup: SupNorms) -> Result<Self> {
        if !(omega_a > 0.0 && omega_a.is_finite()) {
            return Err(QdynError::InvalidArgument(format!("carrier frequency must be positive, got {omega_a}")));
        }
        if d < 2 {
            return Err(QdynError::DimensionTooSmall { min: 2, found: d });
        }
        if !xi_a.is_finite() {
            return Err(QdynError::InvalidArgument("anharmonicity must be finite".into()));
        }
        let norms = [sup.g, sup.g_prime, sup.p, sup.q];
        if norms.iter().any(|x| !(*x >= 0.0 && x.is_finite())) {
            return Err(QdynError::InvalidArgument(format!("sup norms must be nonnegative, got {sup:?}")));
        }
        Ok(Self { omega_a, xi_a, d, p, q, sup })
    }

    /// Constant envelopes `p(t) = p`, `q(t) = q`, with exact sup norms.
    pub fn constant(omega_a: f64, xi_a: f64, d: usize, p: f64, q: f64) -> Result<Self> {
        let sup = SupNorms { g: p.hypot(q), g_prime: 0.0, p: p.abs(), q: q.abs() };
        Self::new(omega_a, xi_a, d, Arc::new(move |_| p), Arc::new(move |_| q), sup)
    }
}

/// `-(xi/2)((a^dag a)^2 - a^dag a)`, diagonal entries `-(xi/2)(k^2 - k)`.
pub fn anharmonic_drift(d: usize, xi_a: f64) -> Result<Operator> {
    let n = number(d)?;
    let n2 = n.matrix() * n.matrix();
    let m = (n2 - n.matrix()) * linalg::r(-0.5 * xi_a);
    Ok(Operator::from_raw(m, OperatorKind::Hermitian))
}

/// `p (a + a^dag) + i q (a - a^dag)`.
pub fn quadrature_control(p: f64, q: f64, d: usize) -> Result<Operator> {
    let a = lowering(d)?;
    let ad = raising(d)?;
    let sum = a.matrix() + ad.matrix();
    let diff = a.matrix() - ad.matrix();
    let m = sum * linalg::r(p) + diff * linalg::c(0.0, q);
    Ok(Operator::from_raw(m, OperatorKind::Hermitian))
}

/// Rotating wave Hamiltonian `drift + p(t)(a + a^dag) + i q(t)(a - a^dag)`.
pub fn rwa_hamiltonian(cfg: &RwaConfig) -> Result<TimeDependentHamiltonian> {
    let drift = anharmonic_drift(cfg.d, cfg.xi_a)?;
    let (p, q, d) = (cfg.p.clone(), cfg.q.clone(), cfg.d);
    Ok(TimeDependentHamiltonian::new(d, "rwa", move |t| {
        let control = quadrature_control(p(t), q(t), d)?;
        drift.add(&control)
    }))
}

/// Exact rotating-frame control `f(t)(e^{-i w t} a + e^{i w t} a^dag) + drift`
/// with `f(t) = 2p(t) cos(w t) - 2q(t) sin(w t)`.
pub fn exact_rot_control(cfg: &RwaConfig) -> Result<TimeDependentHamiltonian> {
    let drift = anharmonic_drift(cfg.d, cfg.xi_a)?;
    let a = lowering(cfg.d)?.into_matrix();
    let ad = a.adjoint();
    let (p, q, d, w) = (cfg.p.clone(), cfg.q.clone(), cfg.d, cfg.omega_a);
    Ok(TimeDependentHamiltonian::new(d, "exact rotating frame", move |t| {
        let (s, c) = (w * t).sin_cos();
        let f = 2.0 * p(t) * c - 2.0 * q(t) * s;
        let phase = Complex64::new(c, -s);
        let m = (&a * phase + &ad * phase.conj()) * linalg::r(f);
        drift.add(&Operator::from_raw(m, OperatorKind::Hermitian))
    }))
}

/// Qubit bound `||e(t)||^2 <= (8|Omega|/w)(1 + 10 t |Omega|^2)` for constant `g = Omega`.
pub fn rwa_error_bound_qubit(omega_abs: f64, omega_a: f64, t: f64) -> f64 {
    8.0 * omega_abs / omega_a * (1.0 + 10.0 * t * omega_abs * omega_abs)
}

/// General bound on `||e(t)||^2`:
/// `(4(d-1)/w) [2||g|| + t(||g'|| + ||g||(C1 + C2))]` with
/// `C1 = (xi/2 (d-1)(d-2) + 4||g|| sqrt(d-1))^2` and
/// `C2 = (xi/2 (d-1)(d-2) + 2||g|| sqrt(d-1))^2`.
pub fn rwa_error_bound_general(cfg: &RwaConfig, t: f64) -> f64 {
    let dm1 = (cfg.d - 1) as f64;
    let g = cfg.sup.g;
    let anh = 0.5 * cfg.xi_a * dm1 * (cfg.d as f64 - 2.0);
    let c1 = (anh + 4.0 * g * dm1.sqrt()).powi(2);
    let c2 = (anh + 2.0 * g * dm1.sqrt()).powi(2);
    4.0 * dm1 / cfg.omega_a * (2.0 * g + t * (cfg.sup.g_prime + g * (c1 + c2)))
}

/// Both forms of the linear-in-time bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpleBound {
    /// `(4 t (d-1) ||g||^2)^2`, a bound on `||e||^2`.
    pub err_sq: f64,
    /// `4 t (d-1) (||p|| + ||q||)^2`, a bound on `||e||`.
    pub err_norm: f64,
}

pub fn rwa_error_bound_simple(cfg: &RwaConfig, t: f64) -> SimpleBound {
    let dm1 = (cfg.d - 1) as f64;
    let g = cfg.sup.g;
    let pq = cfg.sup.p + cfg.sup.q;
    SimpleBound { err_sq: (4.0 * t * dm1 * g * g).powi(2), err_norm: 4.0 * t * dm1 * pq * pq }
}
