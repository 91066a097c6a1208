//! Acceptance suite. Each criterion prints one PASS or FAIL line; the process
//! exits nonzero if any criterion fails.
//!
//! Run with `cargo test -p qdyn --test acceptance`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qdyn::cli::config::{rwa_default_steps, RwaErrorConfig, StepSource};
use qdyn::cli::experiments::{bell_state, run_rwa_error};
use qdyn::closed::{
    ehrenfest_residual, evolve, propagator, rabi_period, rabi_propagator, rwa_error_bound_qubit, trace_fidelity,
    RabiParams, TimeDependentHamiltonian,
};
use qdyn::linalg::{self, c, max_abs_diff, r, CMatrix, I};
use qdyn::measurement::Observable;
use qdyn::open::{
    apply_kraus, concurrence_pure, evolve_lindblad, fidelity, fidelity_pure, fidelity_pure_pure,
    kraus_from_joint_unitary, lindblad_superoperator, lvn_superoperator, partial_trace, ppt_test, reduced_density,
    vectorize, BathSpectral, CollapseOperator, LindbladModel, PptVerdict, Subsystem,
};
use qdyn::quantum::{
    kron, lowering, number, pauli, raising, CompositeDims, DensityMatrix, Operator, PauliAxis, StateVector,
};
use qdyn::random;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn unwrap<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn basis(d: usize, k: usize) -> StateVector {
    let mut v = qdyn::linalg::CVector::zeros(d);
    v[k] = r(1.0);
    StateVector::new(v).unwrap()
}

fn rabi_reproduction() -> Outcome {
    let start = Instant::now();
    let params = unwrap(RabiParams::from_polar(0.5, FRAC_PI_2))?;
    let period = unwrap(rabi_period(0.5))?;
    let traj = unwrap(evolve(&params.time_dependent(), &basis(2, 0), 0.0, period, 2000))?;
    let elapsed = start.elapsed();
    let mut worst = 0.0f64;
    for (t, psi) in traj.iter() {
        let p = psi.populations();
        worst = worst.max((p[0] - (0.5 * t).cos().powi(2)).abs());
        worst = worst.max((p[1] - (0.5 * t).sin().powi(2)).abs());
    }
    check((period - TAU).abs() < 1e-12, || format!("period {period}"))?;
    check(worst <= 1e-6, || format!("max error {worst:e}"))?;
    check(elapsed < Duration::from_secs(1), || format!("runtime {elapsed:?}"))?;
    Ok(format!("max |p - cos^2| = {worst:.2e}, runtime {:.1} ms", elapsed.as_secs_f64() * 1e3))
}

/// Matrix exponential of `-i H t` through the eigendecomposition.
fn expm_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    let eig = linalg::eigh(h);
    let mut u = CMatrix::zeros(h.nrows(), h.ncols());
    for (k, &l) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        u += v * v.adjoint() * c((l * t).cos(), -(l * t).sin());
    }
    u
}

fn analytic_propagator() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_numeric = 0.0f64;
    let mut worst_expm = 0.0f64;
    for _ in 0..20 {
        let abs = rng.random_range(0.1..1.0);
        let theta = rng.random_range(-PI..PI);
        let t = rng.random_range(0.1..4.0);
        let params = unwrap(RabiParams::from_polar(abs, theta))?;
        let closed_form = rabi_propagator(&params, t);
        let numeric = unwrap(propagator(&params.time_dependent(), 0.0, t, 60_000))?;
        worst_numeric = worst_numeric.max(max_abs_diff(numeric.matrix(), closed_form.matrix()));
        let exact = expm_hermitian(params.hamiltonian().matrix(), t);
        worst_expm = worst_expm.max(max_abs_diff(&exact, closed_form.matrix()));
    }
    check(worst_numeric <= 1e-8, || format!("integrated propagator off by {worst_numeric:e}"))?;
    check(worst_expm <= 1e-12, || format!("closed form differs from expm by {worst_expm:e}"))?;

    let mut worst_quarter = 0.0f64;
    for theta in [0.0, 0.7, FRAC_PI_2, 2.5, -1.2] {
        let abs = 0.8;
        let params = unwrap(RabiParams::from_polar(abs, theta))?;
        let quarter = unwrap(rabi_period(abs))? / 4.0;
        let (s, co) = theta.sin_cos();
        let expected = CMatrix::from_row_slice(2, 2, &[r(1.0), c(s, -co), c(-s, -co), r(1.0)]) * r(FRAC_1_SQRT_2);
        let numeric = unwrap(propagator(&params.time_dependent(), 0.0, quarter, 20_000))?;
        worst_quarter = worst_quarter.max(max_abs_diff(numeric.matrix(), &expected));
        worst_quarter = worst_quarter.max(max_abs_diff(rabi_propagator(&params, quarter).matrix(), &expected));
    }
    check(worst_quarter <= 1e-8, || format!("quarter-period propagator off by {worst_quarter:e}"))?;
    Ok(format!(
        "20 random: {worst_numeric:.2e}; quarter period: {worst_quarter:.2e}; closed form vs expm: {worst_expm:.2e}"
    ))
}

fn rwa_config(omega: f64, t_final: f64) -> RwaErrorConfig {
    RwaErrorConfig {
        omega,
        t_final,
        steps: rwa_default_steps(omega, t_final),
        step_source: StepSource::Rule,
        p: 1e-2,
        q: 0.0,
        d: 2,
        xi: 0.0,
    }
}

fn rwa_informative() -> Outcome {
    let start = Instant::now();
    let series = unwrap(run_rwa_error(&rwa_config(TAU, 100.0)))?;
    let elapsed = start.elapsed();
    let times = series.column("t").unwrap();
    let errors = series.column("err_sq").unwrap();
    let mut max_err = 0.0f64;
    for (t, e) in times.iter().zip(&errors) {
        let (t, e) = (t.unwrap(), e.unwrap());
        let bound = rwa_error_bound_qubit(1e-2, TAU, t);
        check(e <= bound, || format!("err_sq {e:e} exceeds bound {bound:e} at t = {t}"))?;
        max_err = max_err.max(e);
    }
    let final_bound = rwa_error_bound_qubit(1e-2, TAU, 100.0);
    check((final_bound - 0.014006).abs() < 5e-6, || format!("bound at T = {final_bound}"))?;
    check(max_err < 0.014, || format!("max err_sq {max_err}"))?;
    check(elapsed < Duration::from_secs(60), || format!("runtime {elapsed:?}"))?;
    Ok(format!(
        "max err_sq {max_err:.3e} <= bound (bound at T = {final_bound:.6}), {} steps, {:.2} s",
        series.rows.len() - 1,
        elapsed.as_secs_f64()
    ))
}

fn rwa_uninformative() -> Outcome {
    let mut notes = Vec::new();
    for (omega, t_final, label) in [(TAU / 1e4, 1e4, "2pi/1e4"), (TAU / 100.0, 1e3, "2pi/100")] {
        let start = Instant::now();
        let series = unwrap(run_rwa_error(&rwa_config(omega, t_final)))?;
        let elapsed = start.elapsed();
        let bounds: Vec<f64> = series.column("bound").unwrap().into_iter().flatten().collect();
        let above = bounds.iter().filter(|&&b| b > 1.0).count() as f64 / bounds.len() as f64;
        let max_err = series.column("err_sq").unwrap().into_iter().flatten().fold(0.0f64, f64::max);
        check(above > 0.5, || format!("omega = {label}: bound exceeds 1 on only {:.0}% of the run", above * 100.0))?;
        check(elapsed < Duration::from_secs(60), || format!("omega = {label}: runtime {elapsed:?}"))?;
        if omega < 1e-3 {
            check(max_err >= 0.5, || format!("omega = {label}: max err_sq only {max_err}"))?;
        }
        notes.push(format!("omega {label}: bound > 1 on {:.0}%, max err_sq {max_err:.3}", above * 100.0));
    }
    Ok(notes.join("; "))
}

fn decay_dephase_runs() -> Result<Vec<(&'static str, qdyn::closed::Trajectory<DensityMatrix>)>, String> {
    let gamma = 0.2;
    let zero = TimeDependentHamiltonian::zero(2);
    let decay =
        unwrap(LindbladModel::new(zero.clone(), vec![unwrap(CollapseOperator::new(gamma, unwrap(lowering(2))?))?]))?;
    let dephase = unwrap(LindbladModel::new(zero, vec![unwrap(CollapseOperator::new(gamma, unwrap(number(2))?))?]))?;
    let excited = DensityMatrix::from_pure(&basis(2, 1));
    let plus =
        DensityMatrix::from_pure(&unwrap(StateVector::from_parts(&[(FRAC_1_SQRT_2, 0.0), (FRAC_1_SQRT_2, 0.0)]))?);
    Ok(vec![
        ("decay", unwrap(evolve_lindblad(&decay, &excited, 0.0, 20.0, 4000))?),
        ("dephasing", unwrap(evolve_lindblad(&dephase, &plus, 0.0, 20.0, 4000))?),
    ])
}

fn conservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h0 = random::hermitian(&mut rng, 3);
    let h1 = random::hermitian(&mut rng, 3);
    let h = TimeDependentHamiltonian::new(3, "driven", move |t| h0.add(&h1.scale(r(t.cos()))));
    let psi0 = random::state(&mut rng, 3);
    let traj = unwrap(evolve(&h, &psi0, 0.0, 100.0, 100_000))?;
    let norm_drift = traj.states().iter().map(|p| (p.norm() - 1.0).abs()).fold(0.0, f64::max);
    check(norm_drift <= 1e-10, || format!("norm drift {norm_drift:e}"))?;

    let (mut trace_drift, mut herm, mut min_eig) = (0.0f64, 0.0f64, f64::INFINITY);
    for (_, run) in decay_dephase_runs()? {
        for rho in run.states() {
            trace_drift = trace_drift.max((linalg::trace(rho.matrix()) - r(1.0)).norm());
            herm = herm.max(linalg::hermiticity_residual(rho.matrix()));
            min_eig = min_eig.min(linalg::min_eigenvalue(rho.matrix()));
        }
    }
    check(trace_drift <= 1e-9, || format!("trace drift {trace_drift:e}"))?;
    check(herm <= 1e-9, || format!("Hermiticity residual {herm:e}"))?;
    check(min_eig >= -1e-7, || format!("min eigenvalue {min_eig:e}"))?;
    Ok(format!(
        "norm drift {norm_drift:.1e} over 1e5 steps; trace drift {trace_drift:.1e}, Hermiticity {herm:.1e}, min eigenvalue {min_eig:.1e}"
    ))
}

fn open_oracles() -> Outcome {
    let gamma: f64 = 0.2;
    let (mut pop_err, mut coh_err, mut pop_const) = (0.0f64, 0.0f64, 0.0f64);
    for (name, run) in decay_dephase_runs()? {
        for (t, rho) in run.iter() {
            let m = rho.matrix();
            match name {
                "decay" => pop_err = pop_err.max((m[(1, 1)].re - (-gamma * t).exp()).abs()),
                _ => {
                    coh_err = coh_err.max((m[(0, 1)].norm() - 0.5 * (-gamma * t / 2.0).exp()).abs());
                    pop_const = pop_const.max((m[(0, 0)].re - 0.5).abs());
                }
            }
        }
    }
    check(pop_err <= 1e-5, || format!("decay population error {pop_err:e}"))?;
    check(coh_err <= 1e-5, || format!("dephasing coherence error {coh_err:e}"))?;
    check(pop_const <= 1e-10, || format!("dephasing moved populations by {pop_const:e}"))?;
    Ok(format!("population error {pop_err:.2e}, coherence error {coh_err:.2e}"))
}

fn algebra() -> Outcome {
    let mut worst = 0.0f64;
    for d in 2..=16 {
        let a = unwrap(lowering(d))?;
        let ad = unwrap(raising(d))?;
        let n_op = unwrap(number(d))?;
        for n in 0..d {
            let e = basis(d, n).into_amplitudes();
            let mut lower = a.matrix() * &e;
            if n > 0 {
                lower[n - 1] -= r((n as f64).sqrt());
            }
            worst = worst.max(lower.norm());
            if n + 1 < d {
                let mut raise = ad.matrix() * &e;
                raise[n + 1] -= r(((n + 1) as f64).sqrt());
                worst = worst.max(raise.norm());
            }
            let mut num = n_op.matrix() * &e;
            num[n] -= r(n as f64);
            worst = worst.max(num.norm());
        }
        worst = worst.max(max_abs_diff(n_op.matrix(), &(ad.matrix() * a.matrix())));
        let comm = a.matrix() * ad.matrix() - ad.matrix() * a.matrix();
        let mut expected = linalg::identity(d);
        expected[(d - 1, d - 1)] = r(-((d - 1) as f64));
        worst = worst.max(max_abs_diff(&comm, &expected));
    }
    check(worst <= 1e-14, || format!("worst residual {worst:e}"))?;
    Ok(format!("d = 2..16, worst residual {worst:.1e}"))
}

fn superoperators() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut lvn, mut lind) = (0.0f64, 0.0f64);
    for k in 0..50 {
        let d = 2 + k % 3;
        let h = random::hermitian(&mut rng, d);
        let rho = random::density(&mut rng, d);
        let (hm, rm) = (h.matrix(), rho.matrix());
        let direct = (hm * rm - rm * hm) * (-I);
        let via = lvn_superoperator(&h).matrix() * vectorize(rm);
        lvn = lvn.max(linalg::max_abs_diff_vec(&via, &vectorize(&direct)));

        let ops: Vec<(f64, Operator)> = (0..2)
            .map(|_| (rng.random_range(0.05..1.0), Operator::new(random::ginibre(&mut rng, d, d)).unwrap()))
            .collect();
        let mut direct = direct.clone();
        for (g, l) in &ops {
            let lm = l.matrix();
            let ldl = lm.adjoint() * lm;
            direct += (lm * rm * lm.adjoint() - (&ldl * rm + rm * &ldl) * r(0.5)) * r(*g);
        }
        let collapses = ops.into_iter().map(|(g, l)| CollapseOperator::new(g, l).unwrap()).collect();
        let model = unwrap(LindbladModel::new(unwrap(TimeDependentHamiltonian::constant(h))?, collapses))?;
        let via = unwrap(lindblad_superoperator(&model, 0.0))?.matrix() * vectorize(rm);
        lind = lind.max(linalg::max_abs_diff_vec(&via, &vectorize(&direct)));
    }
    check(lvn <= 1e-12, || format!("LvN mismatch {lvn:e}"))?;
    check(lind <= 1e-12, || format!("Lindblad mismatch {lind:e}"))?;
    Ok(format!("50 + 50 instances, d in 2..4: LvN {lvn:.1e}, Lindblad {lind:.1e}"))
}

fn kraus_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let dims = CompositeDims::bipartite(2, 2).unwrap();
    let (mut completeness, mut channel, mut product) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..20 {
        let u = random::unitary(&mut rng, 4);
        let rho_b = random::density(&mut rng, 2);
        let ks = unwrap(kraus_from_joint_unitary(&u, &unwrap(BathSpectral::from_density(&rho_b))?, 2))?;
        let sum = ks.operators().iter().fold(CMatrix::zeros(2, 2), |acc, k| acc + k.matrix().adjoint() * k.matrix());
        completeness = completeness.max(max_abs_diff(&sum, &linalg::identity(2)));
        let rho_s = random::density(&mut rng, 2);
        let joint = u.matrix() * linalg::kron(rho_s.matrix(), rho_b.matrix()) * u.matrix().adjoint();
        let oracle = unwrap(partial_trace(&unwrap(Operator::new(joint))?, &dims, Subsystem::A))?;
        channel = channel.max(max_abs_diff(unwrap(apply_kraus(&ks, &rho_s))?.matrix(), oracle.matrix()));

        let (us, ub) = (random::unitary(&mut rng, 2), random::unitary(&mut rng, 2));
        let ks = unwrap(kraus_from_joint_unitary(&kron(&us, &ub), &unwrap(BathSpectral::from_density(&rho_b))?, 2))?;
        let single = us.matrix() * rho_s.matrix() * us.matrix().adjoint();
        product = product.max(max_abs_diff(unwrap(apply_kraus(&ks, &rho_s))?.matrix(), &single));
    }
    check(completeness <= 1e-9, || format!("completeness {completeness:e}"))?;
    check(channel <= 1e-10, || format!("channel vs joint evolution {channel:e}"))?;
    check(product <= 1e-10, || format!("product unitary {product:e}"))?;
    Ok(format!("completeness {completeness:.1e}, joint evolution {channel:.1e}, product {product:.1e}"))
}

fn entanglement_suite() -> Outcome {
    let dims = CompositeDims::bipartite(2, 2).unwrap();
    let half_id = linalg::identity(2) * r(0.5);
    for k in 1..=4 {
        let psi = bell_state(k);
        let rho = DensityMatrix::from_pure(&psi);
        let ra = unwrap(reduced_density(&rho, &dims, Subsystem::A))?;
        let dev = max_abs_diff(ra.matrix(), &half_id);
        check(dev <= 1e-12, || format!("bell{k}: reduced state off by {dev:e}"))?;
        let conc = unwrap(concurrence_pure(&psi, &dims))?;
        check((conc - 1.0).abs() <= 1e-10, || format!("bell{k}: concurrence {conc}"))?;
        let ppt = unwrap(ppt_test(&rho, &dims))?;
        check((ppt.min_eigenvalue + 0.5).abs() <= 1e-10, || {
            format!("bell{k}: min PT eigenvalue {}", ppt.min_eigenvalue)
        })?;
        check(ppt.verdict == PptVerdict::Npt, || format!("bell{k}: not NPT"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut lowest = f64::INFINITY;
    for _ in 0..100 {
        let terms = rng.random_range(1..=4);
        let weights: Vec<f64> = (0..terms).map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = weights.iter().sum();
        let mut m = CMatrix::zeros(4, 4);
        for w in weights {
            m += random::density(&mut rng, 2).kron(&random::density(&mut rng, 2)).matrix() * r(w / total);
        }
        let ppt = unwrap(ppt_test(&unwrap(DensityMatrix::new(m))?, &dims))?;
        check(ppt.verdict == PptVerdict::Ppt, || format!("separable sample flagged NPT ({:e})", ppt.min_eigenvalue))?;
        lowest = lowest.min(ppt.min_eigenvalue);
    }
    Ok(format!(
        "4 Bell states NPT with min PT eigenvalue -1/2; 100 separable samples PPT (lowest PT eigenvalue {lowest:.2e})"
    ))
}

fn fidelity_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut self_dev, mut shortcut, mut pure_pure) = (0.0f64, 0.0f64, 0.0f64);
    for k in 0..50 {
        let d = 2 + k % 3;
        let rho = random::density(&mut rng, d);
        self_dev = self_dev.max((unwrap(fidelity(&rho, &rho))? - 1.0).abs());
        let psi = random::state(&mut rng, d);
        let general = unwrap(fidelity(&DensityMatrix::from_pure(&psi), &rho))?;
        shortcut = shortcut.max((general - unwrap(fidelity_pure(&psi, &rho))?).abs());
        let phi = random::state(&mut rng, d);
        let overlap: num_complex::Complex64 =
            psi.amplitudes().iter().zip(phi.amplitudes().iter()).map(|(a, b)| a.conj() * b).sum();
        pure_pure = pure_pure.max((unwrap(fidelity_pure_pure(&psi, &phi))? - overlap.norm()).abs());
    }
    let mut gate = 0.0f64;
    for d in 2..=4 {
        let u = random::unitary(&mut rng, d);
        gate = gate.max((unwrap(trace_fidelity(&u, &u))? - 1.0).abs());
        let phase = rng.random_range(0.0..TAU);
        gate = gate.max((unwrap(trace_fidelity(&u, &u.scale(c(phase.cos(), phase.sin()))))? - 1.0).abs());
    }
    check(self_dev <= 1e-9, || format!("F(rho, rho) off by {self_dev:e}"))?;
    check(shortcut <= 1e-9, || format!("pure shortcut off by {shortcut:e}"))?;
    check(pure_pure <= 1e-10, || format!("pure-pure off by {pure_pure:e}"))?;
    check(gate <= 1e-12, || format!("trace fidelity off by {gate:e}"))?;
    Ok(format!(
        "F(rho,rho) {self_dev:.1e}, shortcut {shortcut:.1e}, pure-pure {pure_pure:.1e}, trace fidelity {gate:.1e}"
    ))
}

fn convergence() -> Outcome {
    let params = unwrap(RabiParams::from_polar(0.5, FRAC_PI_2))?;
    let h = params.time_dependent();
    let psi0 = basis(2, 0);
    let sz = unwrap(Observable::new(pauli(PauliAxis::Z)))?;
    let t_final = unwrap(rabi_period(0.5))?;
    let mut errors = Vec::new();
    let mut residuals = Vec::new();
    for n in [100usize, 200, 400, 800] {
        let traj = unwrap(evolve(&h, &psi0, 0.0, t_final, n))?;
        let mut worst = 0.0f64;
        for (t, psi) in traj.iter() {
            let exact = unwrap(rabi_propagator(&params, t).apply(&psi0))?;
            worst = worst.max((psi.amplitudes() - exact).norm());
        }
        errors.push(worst);
        residuals.push(unwrap(ehrenfest_residual(&sz, &h, &traj))?);
    }
    let ratios = |v: &[f64]| v.windows(2).map(|w| w[0] / w[1]).collect::<Vec<_>>();
    let (er, rr) = (ratios(&errors), ratios(&residuals));
    let in_band = |x: &f64| (3.5..=4.5).contains(x);
    check(er.iter().all(in_band), || format!("error ratios {er:?}"))?;
    check(rr.iter().all(in_band), || format!("Ehrenfest ratios {rr:?}"))?;
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(", ");
    Ok(format!("error ratios [{}], Ehrenfest ratios [{}]", fmt(&er), fmt(&rr)))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("1 Rabi reproduction", rabi_reproduction),
        ("2 analytic propagator", analytic_propagator),
        ("3 RWA bound, informative regime", rwa_informative),
        ("4 RWA bound, uninformative regimes", rwa_uninformative),
        ("5 conservation", conservation),
        ("6 open-system closed forms", open_oracles),
        ("7 ladder algebra", algebra),
        ("8 superoperator equivalence", superoperators),
        ("9 Kraus", kraus_suite),
        ("10 entanglement", entanglement_suite),
        ("11 fidelity", fidelity_suite),
        ("12 second-order convergence", convergence),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail} [{secs:.2} s]"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  criterion {name}: {detail} [{secs:.2} s]");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 12 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
