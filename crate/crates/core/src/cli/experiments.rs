//! Experiment runners. Each returns a [`CsvSeries`] and touches no shared state.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::closed::{
    evolve, exact_rot_control, rabi_propagator, rwa_error_bound_general, rwa_hamiltonian, RabiParams, RwaConfig,
    TimeDependentHamiltonian,
};
use crate::error::Result;
use crate::linalg::{self, r, CMatrix, CVector};
use crate::open::{
    concurrence_pure, evolve_lindblad, is_maximally_entangled, is_maximally_mixed, ppt_test, purity, reduced_density,
    CollapseOperator, LindbladModel, PptVerdict, Subsystem, PURITY_TOL,
};
use crate::quantum::{
    basis_ket, commutator, lowering, number, raising, CompositeDims, DensityMatrix, Operator, StateVector,
};

use super::config::{
    EntanglementConfig, ExperimentConfig, ExperimentParams, HamiltonianSpec, LindbladConfig, NamedState,
    OscillatorConfig, RabiConfig, Rho0Spec, RwaErrorConfig, StepSource,
};
use super::csv::CsvSeries;

pub fn run(cfg: &ExperimentConfig) -> Result<CsvSeries> {
    let mut series = match &cfg.params {
        ExperimentParams::Rabi(c) => run_rabi(c)?,
        ExperimentParams::RwaError(c) => run_rwa_error(c)?,
        ExperimentParams::Lindblad(c) => run_lindblad(c)?,
        ExperimentParams::Entanglement(c) => run_entanglement(c)?,
        ExperimentParams::OscillatorCheck(c) => run_oscillator_check(c)?,
    };
    series.comments.insert(0, format!("experiment: {}", cfg.experiment));
    if let Some(seed) = cfg.seed {
        series.comment(format!("seed: {seed}"));
    }
    Ok(series)
}

fn basis(d: usize, k: usize) -> StateVector {
    let mut v = CVector::zeros(d);
    v[k] = r(1.0);
    StateVector::new(v).expect("basis vector is normalized")
}

fn probabilities(v: &CVector) -> Vec<f64> {
    v.iter().map(|z| z.norm_sqr()).collect()
}

pub fn run_rabi(cfg: &RabiConfig) -> Result<CsvSeries> {
    let params = RabiParams::new(cfg.omega)?;
    let psi0 = basis(2, cfg.initial);
    log::info!("rabi: Omega = {}, T = {}, {} steps", cfg.omega, cfg.t_final, cfg.steps);
    let traj = evolve(&params.time_dependent(), &psi0, 0.0, cfg.t_final, cfg.steps)?;

    let mut series = CsvSeries::new(["t", "p0_numeric", "p1_numeric", "p0_analytic", "p1_analytic"]);
    series.comment(format!(
        "omega = {} + {}i, initial = {}, steps = {}",
        cfg.omega.re, cfg.omega.im, cfg.initial, cfg.steps
    ));
    for (t, psi) in traj.iter() {
        let numeric = psi.populations();
        let analytic = probabilities(&rabi_propagator(&params, t).apply(&psi0)?);
        series.push_values(&[t, numeric[0], numeric[1], analytic[0], analytic[1]]);
    }
    Ok(series)
}

pub fn run_rwa_error(cfg: &RwaErrorConfig) -> Result<CsvSeries> {
    let rwa_cfg = RwaConfig::constant(cfg.omega, cfg.xi, cfg.d, cfg.p, cfg.q)?;
    let psi0 = basis(cfg.d, 0);
    log::info!("rwa-error: omega = {}, T = {}, {} steps", cfg.omega, cfg.t_final, cfg.steps);
    let exact = evolve(&exact_rot_control(&rwa_cfg)?, &psi0, 0.0, cfg.t_final, cfg.steps)?;
    let approx = evolve(&rwa_hamiltonian(&rwa_cfg)?, &psi0, 0.0, cfg.t_final, cfg.steps)?;

    let mut series = CsvSeries::new(["t", "err_sq", "bound"]);
    let rule = match cfg.step_source {
        StepSource::User => "user supplied".to_string(),
        StepSource::Rule => "rule max(10000, ceil(40 T omega / 2pi)), at least 40 steps per carrier period".to_string(),
    };
    series.comment(format!("steps = {} ({rule})", cfg.steps));
    series.comment(format!(
        "omega = {}, T = {}, p = {}, q = {}, d = {}, xi = {}",
        cfg.omega, cfg.t_final, cfg.p, cfg.q, cfg.d, cfg.xi
    ));
    let mut worst = 0.0f64;
    for ((t, u), v) in exact.iter().zip(approx.states()) {
        let err_sq = (u.amplitudes() - v.amplitudes()).norm_squared();
        worst = worst.max(err_sq);
        series.push_values(&[t, err_sq, rwa_error_bound_general(&rwa_cfg, t)]);
    }
    log::info!("rwa-error: max err_sq = {worst:e}");
    Ok(series)
}

fn lindblad_hamiltonian(spec: &HamiltonianSpec, d: usize) -> Result<TimeDependentHamiltonian> {
    let diag = |v: Vec<f64>| {
        let m = CMatrix::from_diagonal(&CVector::from_iterator(d, v.into_iter().map(r)));
        Operator::hermitian(m)
    };
    match spec {
        HamiltonianSpec::Zero => Ok(TimeDependentHamiltonian::zero(d)),
        HamiltonianSpec::Number(w) => TimeDependentHamiltonian::constant(diag((0..d).map(|k| w * k as f64).collect())?),
        HamiltonianSpec::Diagonal(v) => TimeDependentHamiltonian::constant(diag(v.clone())?),
        HamiltonianSpec::Rabi(omega) => Ok(RabiParams::new(*omega)?.time_dependent()),
    }
}

fn initial_density(spec: &Rho0Spec, d: usize) -> Result<DensityMatrix> {
    match spec {
        Rho0Spec::Basis(k) => Ok(DensityMatrix::from_pure(&basis(d, *k))),
        Rho0Spec::Plus => {
            let mut v = CVector::zeros(d);
            v[0] = r(FRAC_1_SQRT_2);
            v[1] = r(FRAC_1_SQRT_2);
            Ok(DensityMatrix::from_pure(&StateVector::normalized(v)?))
        }
        Rho0Spec::Mixed => DensityMatrix::maximally_mixed(d),
    }
}

pub fn run_lindblad(cfg: &LindbladConfig) -> Result<CsvSeries> {
    let d = cfg.d;
    let mut collapses = Vec::new();
    if cfg.gamma_decay > 0.0 {
        collapses.push(CollapseOperator::new(cfg.gamma_decay, lowering(d)?)?);
    }
    if cfg.gamma_dephase > 0.0 {
        collapses.push(CollapseOperator::new(cfg.gamma_dephase, number(d)?)?);
    }
    let model = LindbladModel::new(lindblad_hamiltonian(&cfg.hamiltonian, d)?, collapses)?;
    let rho0 = initial_density(&cfg.rho0, d)?;
    log::info!("lindblad: d = {d}, {} steps to T = {}", cfg.steps, cfg.t_final);
    let traj = evolve_lindblad(&model, &rho0, 0.0, cfg.t_final, cfg.steps)?;

    let mut header = vec!["t".to_string()];
    header.extend((0..d).map(|k| format!("rho_{k}{k}")));
    header.extend(["coh01".to_string(), "purity".to_string()]);
    let mut series = CsvSeries::new(header);
    series.comment(format!(
        "d = {d}, gamma_decay = {}, gamma_dephase = {}, hamiltonian = {:?}, rho0 = {:?}, steps = {}",
        cfg.gamma_decay, cfg.gamma_dephase, cfg.hamiltonian, cfg.rho0, cfg.steps
    ));
    for (t, rho) in traj.iter() {
        let mut row = vec![t];
        row.extend(rho.populations());
        row.push(rho.matrix()[(0, 1)].norm());
        row.push(rho.purity());
        series.push_values(&row);
    }
    Ok(series)
}

/// Bell state `k` in the order `Phi+, Phi-, Psi+, Psi-`.
pub fn bell_state(k: u8) -> StateVector {
    let s = FRAC_1_SQRT_2;
    let amps = match k {
        1 => [s, 0.0, 0.0, s],
        2 => [s, 0.0, 0.0, -s],
        3 => [0.0, s, s, 0.0],
        _ => [0.0, s, -s, 0.0],
    };
    StateVector::new(CVector::from_iterator(4, amps.into_iter().map(r)))
        .and_then(|v| v.with_dims(CompositeDims::bipartite(2, 2)?))
        .expect("Bell states are normalized")
}

pub fn run_entanglement(cfg: &EntanglementConfig) -> Result<CsvSeries> {
    let dims = CompositeDims::bipartite(2, 2)?;
    let (rho, pure) = match cfg.state {
        NamedState::Bell(k) => {
            let psi = bell_state(k);
            (DensityMatrix::from_pure(&psi), Some(psi))
        }
        NamedState::Product => {
            let psi = basis_ket(&[0, 1], &dims)?;
            (DensityMatrix::from_pure(&psi), Some(psi))
        }
        NamedState::Werner(p) => {
            let bell = DensityMatrix::from_pure(&bell_state(1));
            let m = bell.matrix() * r(p) + linalg::identity(4) * r((1.0 - p) / 4.0);
            (DensityMatrix::new(m)?, None)
        }
    };
    let reduced = reduced_density(&rho, &dims, Subsystem::A)?;
    let concurrence = pure.map(|psi| concurrence_pure(&psi, &dims)).transpose()?;
    let ppt = ppt_test(&rho, &dims)?;
    let max_ent = is_maximally_entangled(&rho, &dims, PURITY_TOL)?;
    let flag = |b: bool| Some(if b { 1.0 } else { 0.0 });

    let mut series = CsvSeries::new([
        "purity",
        "reduced_purity",
        "concurrence",
        "min_pt_eigenvalue",
        "npt",
        "maximally_mixed",
        "maximally_entangled",
    ]);
    series.comment(format!("state = {:?}", cfg.state));
    series.comment("concurrence is blank for mixed states; npt is 1 for a negative partial transpose, 0 otherwise");
    series.push(vec![
        Some(purity(&rho)),
        Some(reduced.purity()),
        concurrence,
        Some(ppt.min_eigenvalue),
        flag(ppt.verdict == PptVerdict::Npt),
        flag(is_maximally_mixed(&rho, PURITY_TOL)),
        flag(max_ent.is_maximally_entangled()),
    ]);
    Ok(series)
}

pub fn run_oscillator_check(cfg: &OscillatorConfig) -> Result<CsvSeries> {
    let d = cfg.d;
    let a = lowering(d)?;
    let ad = raising(d)?;
    let n_op = number(d)?;
    let comm = commutator(&a, &ad)?;
    let mut expected = linalg::identity(d);
    expected[(d - 1, d - 1)] = r(1.0 - d as f64);
    let comm_dev = linalg::max_abs_diff(comm.matrix(), &expected);
    let trunc_entry = comm.matrix()[(d - 1, d - 1)].re;
    let eig = linalg::eigvalsh(n_op.matrix());

    let mut series =
        CsvSeries::new(["n", "lower_res", "raise_res", "number_res", "number_eig", "comm_dev", "trunc_entry"]);
    series.comment(format!("d = {d}; raise_res is blank at the top level n = d - 1"));
    let residual = |op: &Operator, n: usize, target: Option<(usize, f64)>| -> Result<f64> {
        let out = op.apply(&basis(d, n))?;
        let mut want = CVector::zeros(d);
        if let Some((k, c)) = target {
            want[k] = r(c);
        }
        Ok((out - want).norm())
    };
    for (n, &eig_n) in eig.iter().enumerate() {
        let lower = residual(&a, n, n.checked_sub(1).map(|m| (m, (n as f64).sqrt())))?;
        let raise = if n + 1 < d { Some(residual(&ad, n, Some((n + 1, ((n + 1) as f64).sqrt())))?) } else { None };
        let num = residual(&n_op, n, Some((n, n as f64)))?;
        series.push(vec![
            Some(n as f64),
            Some(lower),
            raise,
            Some(num),
            Some(eig_n),
            Some(comm_dev),
            Some(trunc_entry),
        ]);
    }
    Ok(series)
}
