//! C ABI for `qdyn`.
//!
//! Objects cross the boundary as opaque heap handles created by `qdyn_*_new` and
//! released with the matching `qdyn_*_free`. Matrices are exchanged as row-major
//! arrays of [`QdynComplex`]. Every fallible call returns a [`QdynStatus`]; on
//! failure `qdyn_last_error` describes the problem for the calling thread.
//! Panics never unwind into C; they are reported as `QDYN_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qdyn::cli::{self, ExperimentConfig, RawConfig};
use qdyn::closed::{self, RabiParams, RwaConfig, TimeDependentHamiltonian};
use qdyn::linalg::{self, CMatrix, CVector};
use qdyn::open::{self, CollapseOperator, LindbladModel};
use qdyn::quantum::{CompositeDims, DensityMatrix, Operator, StateVector};
use qdyn::QdynError;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QdynStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotHermitian = 4,
    NotUnitary = 5,
    NotPositive = 6,
    NotNormalized = 7,
    Numerical = 8,
    Config = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QdynComplex {
    pub re: f64,
    pub im: f64,
}

/// Opaque square matrix.
pub struct QdynOperator(Operator);
/// Opaque normalized state vector.
pub struct QdynState(StateVector);
/// Opaque density matrix.
pub struct QdynDensity(DensityMatrix);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(e: &QdynError) -> QdynStatus {
    match e {
        QdynError::DimensionMismatch { .. } | QdynError::InvalidDims { .. } | QdynError::NotBipartite(_) => {
            QdynStatus::DimensionMismatch
        }
        QdynError::NotHermitian { .. } => QdynStatus::NotHermitian,
        QdynError::NotUnitary { .. } => QdynStatus::NotUnitary,
        QdynError::NotPositive { .. } | QdynError::BadTrace { .. } => QdynStatus::NotPositive,
        QdynError::NotNormalized { .. } => QdynStatus::NotNormalized,
        QdynError::SingularSystem { .. } | QdynError::PositivityViolation { .. } | QdynError::NegativeVariance(_) => {
            QdynStatus::Numerical
        }
        _ => QdynStatus::InvalidArgument,
    }
}

enum Failure {
    Status(QdynStatus, String),
    Core(QdynError),
}

impl From<QdynError> for Failure {
    fn from(e: QdynError) -> Self {
        Failure::Core(e)
    }
}

impl From<cli::CliError> for Failure {
    fn from(e: cli::CliError) -> Self {
        match e {
            cli::CliError::Numerical(inner) => Failure::Core(inner),
            other => Failure::Status(QdynStatus::Config, other.to_string()),
        }
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(QdynStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QdynStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QdynStatus::Ok,
        Ok(Err(Failure::Status(s, msg))) => {
            set_last_error(msg);
            s
        }
        Ok(Err(Failure::Core(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic");
            QdynStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn slice<'a, T>(data: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn matrix_from(data: *const QdynComplex, dim: usize) -> Result<CMatrix, Failure> {
    if dim == 0 {
        return Err(Failure::Status(QdynStatus::InvalidArgument, "dimension must be positive".into()));
    }
    let entries = slice(data, dim * dim, "matrix data")?;
    Ok(CMatrix::from_row_iterator(dim, dim, entries.iter().map(|z| linalg::c(z.re, z.im))))
}

unsafe fn copy_matrix(m: &CMatrix, out: *mut QdynComplex, len: usize) -> Result<(), Failure> {
    let n = m.nrows() * m.ncols();
    if len < n {
        return Err(Failure::Status(QdynStatus::DimensionMismatch, format!("buffer holds {len} entries, need {n}")));
    }
    if out.is_null() {
        return Err(null("output buffer"));
    }
    let buf = std::slice::from_raw_parts_mut(out, n);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            buf[i * m.ncols() + j] = QdynComplex { re: z.re, im: z.im };
        }
    }
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message for the most recent failure on this thread. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn qdyn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

// Operators

/// Copies a row-major `dim x dim` matrix into a new operator handle.
///
/// # Safety
/// `data` must point to `dim * dim` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdyn_operator_new(
    data: *const QdynComplex,
    dim: usize,
    out: *mut *mut QdynOperator,
) -> QdynStatus {
    guard(|| {
        let op = Operator::new(matrix_from(data, dim)?)?;
        write_out(out, boxed(QdynOperator(op)), "out")
    })
}

/// # Safety
/// `op` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qdyn_operator_free(op: *mut QdynOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Dimension of `op`, or 0 for null.
///
/// # Safety
/// `op` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qdyn_operator_dim(op: *const QdynOperator) -> usize {
    op.as_ref().map_or(0, |o| o.0.dim())
}

/// Writes the entries of `op` row-major into `out`, which holds `len` values.
///
/// # Safety
/// `op` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn qdyn_operator_data(op: *const QdynOperator, out: *mut QdynComplex, len: usize) -> QdynStatus {
    guard(|| copy_matrix(borrow(op, "operator")?.0.matrix(), out, len))
}

// States

/// Copies `dim` amplitudes into a new state handle. The vector must have unit norm.
///
/// # Safety
/// `data` must point to `dim` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdyn_state_new(data: *const QdynComplex, dim: usize, out: *mut *mut QdynState) -> QdynStatus {
    guard(|| {
        let amps = slice(data, dim, "state data")?;
        let v = CVector::from_iterator(dim, amps.iter().map(|z| linalg::c(z.re, z.im)));
        write_out(out, boxed(QdynState(StateVector::new(v)?)), "out")
    })
}

/// # Safety
/// `psi` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qdyn_state_free(psi: *mut QdynState) {
    if !psi.is_null() {
        drop(Box::from_raw(psi));
    }
}

/// # Safety
/// `psi` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qdyn_state_dim(psi: *const QdynState) -> usize {
    psi.as_ref().map_or(0, |p| p.0.dim())
}

/// # Safety
/// `psi` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn qdyn_state_data(psi: *const QdynState, out: *mut QdynComplex, len: usize) -> QdynStatus {
    guard(|| {
        let v = borrow(psi, "state")?.0.amplitudes();
        copy_matrix(&CMatrix::from_column_slice(v.len(), 1, v.as_slice()), out, len)
    })
}

// Density matrices

/// Validates and copies a row-major density matrix.
///
/// # Safety
/// `data` must point to `dim * dim` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdyn_density_new(
    data: *const QdynComplex,
    dim: usize,
    out: *mut *mut QdynDensity,
) -> QdynStatus {
    guard(|| {
        let rho = DensityMatrix::new(matrix_from(data, dim)?)?;
        write_out(out, boxed(QdynDensity(rho)), "out")
    })
}

/// `psi psi^dag`.
///
/// # Safety
/// `psi` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdyn_density_from_state(psi: *const QdynState, out: *mut *mut QdynDensity) -> QdynStatus {
    guard(|| {
        let rho = DensityMatrix::from_pure(&borrow(psi, "state")?.0);
        write_out(out, boxed(QdynDensity(rho)), "out")
    })
}

/// # Safety
/// `rho` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qdyn_density_free(rho: *mut QdynDensity) {
    if !rho.is_null() {
        drop(Box::from_raw(rho));
    }
}

/// # Safety
/// `rho` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qdyn_density_dim(rho: *const QdynDensity) -> usize {
    rho.as_ref().map_or(0, |r| r.0.dim())
}

/// # Safety
/// `rho` must be a live handle and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn qdyn_density_data(rho: *const QdynDensity, out: *mut QdynComplex, len: usize) -> QdynStatus {
    guard(|| copy_matrix(borrow(rho, "density")?.0.matrix(), out, len))
}

// Dynamics

/// Closed-form Rabi propagator `exp(-i (Omega a + conj(Omega) a^dag) t)` on a qubit.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdyn_rabi_propagator(omega: QdynComplex, t: f64, out: *mut *mut QdynOperator) -> QdynStatus {
    guard(|| {
        let params = RabiParams::new(linalg::c(omega.re, omega.im))?;
        write_out(out, boxed(QdynOperator(closed::rabi_propagator(&params, t))), "out")
    })
}

/// Evolves `psi0` under the constant Hamiltonian `h` from `t0` to `t1` and
/// returns the final state.
///
/// # Safety
/// `h` and `psi0` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdyn_evolve(
    h: *const QdynOperator,
    psi0: *const QdynState,
    t0: f64,
    t1: f64,
    steps: usize,
    out: *mut *mut QdynState,
) -> QdynStatus {
    guard(|| {
        let ham = TimeDependentHamiltonian::constant(borrow(h, "hamiltonian")?.0.clone())?;
        let traj = closed::evolve(&ham, &borrow(psi0, "initial state")?.0, t0, t1, steps)?;
        let last = traj.last().expect("trajectory is never empty").clone();
        write_out(out, boxed(QdynState(last)), "out")
    })
}

/// Lindblad evolution with constant `h` and `count` collapse operators
/// `collapses[k]` at rates `gammas[k] > 0`, from 0 to `t1`. Returns the final state.
///
/// # Safety
/// `h`, `rho0` and every `collapses[k]` must be live handles; `collapses` and
/// `gammas` must hold `count` entries; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdyn_lindblad_evolve(
    h: *const QdynOperator,
    collapses: *const *const QdynOperator,
    gammas: *const f64,
    count: usize,
    rho0: *const QdynDensity,
    t1: f64,
    steps: usize,
    out: *mut *mut QdynDensity,
) -> QdynStatus {
    guard(|| {
        let ham = TimeDependentHamiltonian::constant(borrow(h, "hamiltonian")?.0.clone())?;
        let ops = slice(collapses, count, "collapse operators")?;
        let rates = slice(gammas, count, "rates")?;
        let mut cs = Vec::with_capacity(count);
        for (&op, &g) in ops.iter().zip(rates) {
            cs.push(CollapseOperator::new(g, borrow(op, "collapse operator")?.0.clone())?);
        }
        let model = LindbladModel::new(ham, cs)?;
        let traj = open::evolve_lindblad(&model, &borrow(rho0, "initial density")?.0, 0.0, t1, steps)?;
        let last = traj.last().expect("trajectory is never empty").clone();
        write_out(out, boxed(QdynDensity(last)), "out")
    })
}

// Diagnostics

/// `Tr sqrt(sqrt(rho) sigma sqrt(rho))`.
///
/// # Safety
/// `rho` and `sigma` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdyn_fidelity(
    rho: *const QdynDensity,
    sigma: *const QdynDensity,
    out: *mut f64,
) -> QdynStatus {
    guard(|| {
        let f = open::fidelity(&borrow(rho, "rho")?.0, &borrow(sigma, "sigma")?.0)?;
        write_out(out, f, "out")
    })
}

/// Pure-state concurrence of `psi` split as `dim_a x dim_b`.
///
/// # Safety
/// `psi` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdyn_concurrence(
    psi: *const QdynState,
    dim_a: usize,
    dim_b: usize,
    out: *mut f64,
) -> QdynStatus {
    guard(|| {
        let dims = CompositeDims::bipartite(dim_a, dim_b)?;
        write_out(out, open::concurrence_pure(&borrow(psi, "state")?.0, &dims)?, "out")
    })
}

/// `|Tr(U^dag V)|^2 / d^2`.
///
/// # Safety
/// `u` and `v` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdyn_trace_fidelity(
    u: *const QdynOperator,
    v: *const QdynOperator,
    out: *mut f64,
) -> QdynStatus {
    guard(|| write_out(out, closed::trace_fidelity(&borrow(u, "u")?.0, &borrow(v, "v")?.0)?, "out"))
}

/// General RWA error bound on `||e(t)||^2` for constant envelopes `p`, `q`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdyn_rwa_error_bound(
    omega_a: f64,
    xi: f64,
    dim: usize,
    p: f64,
    q: f64,
    t: f64,
    out: *mut f64,
) -> QdynStatus {
    guard(|| {
        let cfg = RwaConfig::constant(omega_a, xi, dim, p, q)?;
        write_out(out, closed::rwa_error_bound_general(&cfg, t), "out")
    })
}

// Experiments

/// Runs the experiment described by `config` (the CLI's `key=value` format) and
/// returns the CSV text through `out_csv`. Any `out` key is ignored. Release the
/// string with `qdyn_string_free`.
///
/// # Safety
/// `config` must be a NUL-terminated string; `out_csv` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdyn_run_experiment(config: *const c_char, out_csv: *mut *mut c_char) -> QdynStatus {
    guard(|| {
        if config.is_null() {
            return Err(null("config"));
        }
        let text = CStr::from_ptr(config)
            .to_str()
            .map_err(|_| Failure::Status(QdynStatus::Config, "config is not UTF-8".into()))?;
        let cfg = ExperimentConfig::from_raw(&RawConfig::parse(text)?)?;
        let csv = cli::experiments::run(&cfg)?.render();
        let c = CString::new(csv).expect("CSV contains no NUL");
        write_out(out_csv, c.into_raw(), "out_csv")
    })
}

/// # Safety
/// `s` must come from `qdyn_run_experiment` and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qdyn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
