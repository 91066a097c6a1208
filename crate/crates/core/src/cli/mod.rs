//! Command-line experiment runner.
//!
//! Parameters come from `key=value` config files and `--key value` flags, with flags
//! taking precedence. Each `--config` file describes one run; several files run in
//! parallel, one thread per run.

pub mod config;
pub mod csv;
pub mod experiments;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

use crate::error::QdynError;

pub use config::{Experiment, ExperimentConfig, RawConfig};
pub use csv::CsvSeries;

/// Exit code for bad configuration or an unknown experiment.
pub const EXIT_CONFIG: i32 = 2;
/// Exit code when the numerics abort, e.g. a density matrix losing positivity.
pub const EXIT_NUMERICAL: i32 = 3;
/// Exit code for I/O failures.
pub const EXIT_IO: i32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(QdynError),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<QdynError> for CliError {
    fn from(e: QdynError) -> Self {
        match e {
            QdynError::SingularSystem { .. }
            | QdynError::PositivityViolation { .. }
            | QdynError::NotUnitary { .. }
            | QdynError::NotHermitian { .. }
            | QdynError::NotPositive { .. }
            | QdynError::BadTrace { .. }
            | QdynError::NegativeVariance(_) => CliError::Numerical(e),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qdyn", version, about = "Run quantum dynamics experiments and write CSV time series")]
pub struct Args {
    /// rabi, rwa-error, lindblad, entanglement or oscillator-check
    #[arg(long)]
    pub experiment: Option<String>,
    /// key=value file; repeat to run several experiments in parallel
    #[arg(long)]
    pub config: Vec<PathBuf>,
    /// Output CSV path (standard output if absent)
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,

    #[arg(long = "omega-re", allow_hyphen_values = true)]
    pub omega_re: Option<String>,
    #[arg(long = "omega-im", allow_hyphen_values = true)]
    pub omega_im: Option<String>,
    /// Carrier frequency (rwa-error)
    #[arg(long)]
    pub omega: Option<String>,
    /// Final time
    #[arg(long = "T")]
    pub t_final: Option<String>,
    #[arg(long)]
    pub steps: Option<String>,
    /// Initial basis state, 0 or 1 (rabi)
    #[arg(long)]
    pub initial: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Hilbert space dimension
    #[arg(long)]
    pub d: Option<String>,
    /// Anharmonicity (rwa-error)
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<String>,
    #[arg(long = "gamma-decay")]
    pub gamma_decay: Option<String>,
    #[arg(long = "gamma-dephase")]
    pub gamma_dephase: Option<String>,
    /// Level index, plus or mixed (lindblad)
    #[arg(long)]
    pub rho0: Option<String>,
    /// zero, number:<w>, diag:<h0>:<h1>... or rabi:<re>:<im> (lindblad)
    #[arg(long)]
    pub hamiltonian: Option<String>,
    /// bell1..bell4, product or werner (entanglement)
    #[arg(long)]
    pub state: Option<String>,
    #[arg(long = "werner-p")]
    pub werner_p: Option<String>,
}

impl Args {
    /// Flags as a raw config layer.
    pub fn flag_layer(&self) -> Result<RawConfig, CliError> {
        let pairs = [
            ("experiment", &self.experiment),
            ("out", &self.out),
            ("seed", &self.seed),
            ("omega-re", &self.omega_re),
            ("omega-im", &self.omega_im),
            ("omega", &self.omega),
            ("T", &self.t_final),
            ("steps", &self.steps),
            ("initial", &self.initial),
            ("p", &self.p),
            ("q", &self.q),
            ("d", &self.d),
            ("xi", &self.xi),
            ("gamma-decay", &self.gamma_decay),
            ("gamma-dephase", &self.gamma_dephase),
            ("rho0", &self.rho0),
            ("hamiltonian", &self.hamiltonian),
            ("state", &self.state),
            ("werner-p", &self.werner_p),
        ];
        let mut raw = RawConfig::default();
        for (key, value) in pairs {
            if let Some(v) = value {
                raw.set(key, v)?;
            }
        }
        Ok(raw)
    }

    /// One validated config per run.
    pub fn resolve(&self) -> Result<Vec<ExperimentConfig>, CliError> {
        let flags = self.flag_layer()?;
        if self.config.is_empty() {
            return Ok(vec![ExperimentConfig::from_raw(&flags)?]);
        }
        let mut runs = Vec::with_capacity(self.config.len());
        for path in &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            let file = RawConfig::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            runs.push(ExperimentConfig::from_raw(&file.merge(&flags))?);
        }
        let mut outputs: Vec<_> = runs.iter().map(|r| r.output_path.clone()).collect();
        outputs.sort();
        if runs.len() > 1 && outputs.windows(2).any(|w| w[0] == w[1]) {
            return Err(CliError::Config("parallel runs need distinct --out paths".into()));
        }
        Ok(runs)
    }
}

/// Runs one experiment and writes its CSV.
pub fn execute(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let text = experiments::run(cfg)?.render();
    match &cfg.output_path {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

/// Executes all runs, in parallel when there are several, and returns the first failure.
pub fn execute_all(runs: &[ExperimentConfig]) -> Result<(), CliError> {
    if let [single] = runs {
        return execute(single);
    }
    let results: Vec<Result<(), CliError>> = std::thread::scope(|s| {
        let handles: Vec<_> = runs.iter().map(|cfg| s.spawn(move || execute(cfg))).collect();
        handles.into_iter().map(|h| h.join().expect("experiment thread panicked")).collect()
    });
    let mut first = None;
    for (cfg, res) in runs.iter().zip(results) {
        if let Err(e) = res {
            log::error!("{} run failed: {e}", cfg.experiment);
            first.get_or_insert(e);
        }
    }
    first.map_or(Ok(()), Err)
}

/// Entry point shared by the binary and tests; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match args.resolve().and_then(|runs| execute_all(&runs)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qdyn: {e}");
            e.exit_code()
        }
    }
}
