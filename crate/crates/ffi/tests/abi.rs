use std::ffi::{CStr, CString};
use std::ptr;

use qdyn_ffi::*;

fn cx(re: f64, im: f64) -> QdynComplex {
    QdynComplex { re, im }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(qdyn_last_error()) }.to_string_lossy().into_owned()
}

fn operator(data: &[QdynComplex], dim: usize) -> *mut QdynOperator {
    let mut op = ptr::null_mut();
    assert_eq!(unsafe { qdyn_operator_new(data.as_ptr(), dim, &mut op) }, QdynStatus::Ok);
    op
}

fn state(data: &[QdynComplex]) -> *mut QdynState {
    let mut psi = ptr::null_mut();
    assert_eq!(unsafe { qdyn_state_new(data.as_ptr(), data.len(), &mut psi) }, QdynStatus::Ok);
    psi
}

#[test]
fn operator_round_trip_is_row_major() {
    let data = [cx(1.0, 0.0), cx(2.0, 1.0), cx(3.0, -1.0), cx(4.0, 0.0)];
    let op = operator(&data, 2);
    unsafe {
        assert_eq!(qdyn_operator_dim(op), 2);
        let mut back = [QdynComplex::default(); 4];
        assert_eq!(qdyn_operator_data(op, back.as_mut_ptr(), 4), QdynStatus::Ok);
        assert_eq!(back, data);
        assert_eq!(qdyn_operator_data(op, back.as_mut_ptr(), 3), QdynStatus::DimensionMismatch);
        qdyn_operator_free(op);
        qdyn_operator_free(ptr::null_mut());
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut psi = ptr::null_mut();
        let bad = [cx(1.0, 0.0), cx(1.0, 0.0)];
        assert_eq!(qdyn_state_new(bad.as_ptr(), 2, &mut psi), QdynStatus::NotNormalized);
        assert!(psi.is_null());
        assert!(!last_error().is_empty());

        let mut rho = ptr::null_mut();
        let not_psd = [cx(1.5, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(-0.5, 0.0)];
        assert_eq!(qdyn_density_new(not_psd.as_ptr(), 2, &mut rho), QdynStatus::NotPositive);

        let mut f = 0.0;
        assert_eq!(qdyn_fidelity(ptr::null(), ptr::null(), &mut f), QdynStatus::NullPointer);
        assert!(last_error().contains("null"));
        let mut out = ptr::null_mut();
        assert_eq!(qdyn_rabi_propagator(cx(0.0, 0.0), 1.0, &mut out), QdynStatus::InvalidArgument);
    }
}

#[test]
fn rabi_evolution_matches_closed_form() {
    unsafe {
        let omega = cx(0.0, 0.5);
        let h = operator(&[cx(0.0, 0.0), cx(0.0, 0.5), cx(0.0, -0.5), cx(0.0, 0.0)], 2);
        let psi0 = state(&[cx(1.0, 0.0), cx(0.0, 0.0)]);
        let t = 1.3;
        let mut psi = ptr::null_mut();
        assert_eq!(qdyn_evolve(h, psi0, 0.0, t, 2000, &mut psi), QdynStatus::Ok);
        let mut amps = [QdynComplex::default(); 2];
        assert_eq!(qdyn_state_data(psi, amps.as_mut_ptr(), 2), QdynStatus::Ok);
        let p0 = amps[0].re.powi(2) + amps[0].im.powi(2);
        assert!((p0 - (0.5 * t).cos().powi(2)).abs() < 1e-6);

        let mut u = ptr::null_mut();
        assert_eq!(qdyn_rabi_propagator(omega, t, &mut u), QdynStatus::Ok);
        let mut tf = 0.0;
        assert_eq!(qdyn_trace_fidelity(u, u, &mut tf), QdynStatus::Ok);
        assert!((tf - 1.0).abs() < 1e-12);

        qdyn_operator_free(u);
        qdyn_state_free(psi);
        qdyn_state_free(psi0);
        qdyn_operator_free(h);
    }
}

#[test]
fn lindblad_decay_and_fidelity() {
    unsafe {
        let zero = cx(0.0, 0.0);
        let h = operator(&[zero; 4], 2);
        let a = operator(&[zero, cx(1.0, 0.0), zero, zero], 2);
        let mut rho0 = ptr::null_mut();
        let excited = [zero, zero, zero, cx(1.0, 0.0)];
        assert_eq!(qdyn_density_new(excited.as_ptr(), 2, &mut rho0), QdynStatus::Ok);
        let collapses = [a as *const QdynOperator];
        let gammas = [0.2];
        let mut rho = ptr::null_mut();
        let status = qdyn_lindblad_evolve(h, collapses.as_ptr(), gammas.as_ptr(), 1, rho0, 5.0, 1000, &mut rho);
        assert_eq!(status, QdynStatus::Ok, "{}", last_error());
        let mut m = [QdynComplex::default(); 4];
        assert_eq!(qdyn_density_data(rho, m.as_mut_ptr(), 4), QdynStatus::Ok);
        assert!((m[3].re - (-1.0f64).exp()).abs() < 1e-5);

        let mut f = 0.0;
        assert_eq!(qdyn_fidelity(rho, rho, &mut f), QdynStatus::Ok);
        assert!((f - 1.0).abs() < 1e-9);

        qdyn_density_free(rho);
        qdyn_density_free(rho0);
        qdyn_operator_free(a);
        qdyn_operator_free(h);
    }
}

#[test]
fn bell_concurrence_and_bound() {
    unsafe {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = state(&[cx(s, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(s, 0.0)]);
        let mut c = 0.0;
        assert_eq!(qdyn_concurrence(bell, 2, 2, &mut c), QdynStatus::Ok);
        assert!((c - 1.0).abs() < 1e-10);
        assert_eq!(qdyn_concurrence(bell, 3, 2, &mut c), QdynStatus::DimensionMismatch);

        let mut rho = ptr::null_mut();
        assert_eq!(qdyn_density_from_state(bell, &mut rho), QdynStatus::Ok);
        assert_eq!(qdyn_density_dim(rho), 4);
        qdyn_density_free(rho);
        qdyn_state_free(bell);

        let mut b = 0.0;
        let status = qdyn_rwa_error_bound(std::f64::consts::TAU, 0.0, 2, 1e-2, 0.0, 100.0, &mut b);
        assert_eq!(status, QdynStatus::Ok);
        assert!((b - 0.0140056).abs() < 1e-6);
    }
}

#[test]
fn experiment_from_config_text() {
    unsafe {
        let cfg = CString::new("experiment=oscillator-check\nd=4\n").unwrap();
        let mut csv = ptr::null_mut();
        assert_eq!(qdyn_run_experiment(cfg.as_ptr(), &mut csv), QdynStatus::Ok);
        let text = CStr::from_ptr(csv).to_str().unwrap().to_owned();
        qdyn_string_free(csv);
        assert!(text.contains("n,lower_res,raise_res"));
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 5);

        let bad = CString::new("experiment=nope\n").unwrap();
        assert_eq!(qdyn_run_experiment(bad.as_ptr(), &mut csv), QdynStatus::Config);
        assert!(last_error().contains("unknown experiment"));
    }
}

#[test]
fn header_is_valid_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/qdyn.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in ["qdyn_operator_new", "qdyn_lindblad_evolve", "qdyn_run_experiment", "QDYN_STATUS_PANIC"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    // Compile check only when a C compiler is around.
    let Ok(status) = std::process::Command::new("cc").args(["-fsyntax-only", "-x", "c", header]).status() else {
        return;
    };
    assert!(status.success());
}
