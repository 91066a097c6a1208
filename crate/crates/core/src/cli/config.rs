//! Flat `key=value` configuration merged with command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;

use super::CliError;

/// Every key accepted in a config file or as a `--key` flag.
pub const KNOWN_KEYS: &[&str] = &[
    "experiment",
    "out",
    "seed",
    "omega-re",
    "omega-im",
    "omega",
    "T",
    "steps",
    "initial",
    "p",
    "q",
    "d",
    "xi",
    "gamma-decay",
    "gamma-dephase",
    "rho0",
    "hamiltonian",
    "state",
    "werner-p",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Rabi,
    RwaError,
    Lindblad,
    Entanglement,
    OscillatorCheck,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::Rabi,
        Experiment::RwaError,
        Experiment::Lindblad,
        Experiment::Entanglement,
        Experiment::OscillatorCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Rabi => "rabi",
            Experiment::RwaError => "rwa-error",
            Experiment::Lindblad => "lindblad",
            Experiment::Entanglement => "entanglement",
            Experiment::OscillatorCheck => "oscillator-check",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Experiment::Rabi => &["omega-re", "omega-im", "T", "steps", "initial"],
            Experiment::RwaError => &["omega", "T", "steps", "p", "q", "d", "xi"],
            Experiment::Lindblad => &["d", "gamma-decay", "gamma-dephase", "T", "steps", "rho0", "hamiltonian"],
            Experiment::Entanglement => &["state", "werner-p"],
            Experiment::OscillatorCheck => &["d"],
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Experiment::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| {
            let names: Vec<_> = Experiment::ALL.iter().map(|e| e.name()).collect();
            CliError::Config(format!("unknown experiment '{s}' (expected one of: {})", names.join(", ")))
        })
    }
}

/// Raw key-value pairs; later insertions override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    values: BTreeMap<String, String>,
}

impl RawConfig {
    /// Parses `key=value` lines. Blank lines and `#` comments are skipped, and a
    /// `#` after a value starts a trailing comment.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = RawConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!("line {}: expected key=value, got '{line}'", lineno + 1)));
            };
            let key = key.trim().trim_start_matches("--");
            cfg.set(key, value.trim()).map_err(|e| CliError::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(CliError::Config(format!("unknown parameter '{key}'")));
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Overlays `other` on top of `self`.
    pub fn merge(mut self, other: &RawConfig) -> Self {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), v.clone());
        }
        self
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| CliError::Config(format!("--{key}: cannot parse '{v}'"))),
        }
    }

    fn required<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        self.parsed(key)?.ok_or_else(|| CliError::Config(format!("missing required parameter --{key}")))
    }

    fn or<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.parsed(key)?.unwrap_or(default))
    }
}

fn positive(key: &str, x: f64) -> Result<f64, CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Config(format!("--{key} must be positive, got {x}")))
    }
}

fn nonnegative(key: &str, x: f64) -> Result<f64, CliError> {
    if x >= 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Config(format!("--{key} must be nonnegative, got {x}")))
    }
}

fn finite(key: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Config(format!("--{key} must be finite, got {x}")))
    }
}

fn steps(key: &str, n: usize) -> Result<usize, CliError> {
    if n >= 1 {
        Ok(n)
    } else {
        Err(CliError::Config(format!("--{key} must be at least 1")))
    }
}

fn dimension(key: &str, d: usize) -> Result<usize, CliError> {
    if d >= 2 {
        Ok(d)
    } else {
        Err(CliError::Config(format!("--{key} must be at least 2, got {d}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RabiConfig {
    pub omega: Complex64,
    pub t_final: f64,
    pub steps: usize,
    pub initial: usize,
}

/// How the step count of an RWA run was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepSource {
    User,
    /// `max(10^4, ceil(40 T w / 2pi))`: at least 40 steps per carrier period.
    Rule,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RwaErrorConfig {
    pub omega: f64,
    pub t_final: f64,
    pub steps: usize,
    pub step_source: StepSource,
    pub p: f64,
    pub q: f64,
    pub d: usize,
    pub xi: f64,
}

/// Default step count for RWA runs.
pub fn rwa_default_steps(omega: f64, t_final: f64) -> usize {
    let per_period = (40.0 * t_final * omega / std::f64::consts::TAU).ceil();
    (per_period as usize).max(10_000)
}

#[derive(Debug, Clone, PartialEq)]
pub enum HamiltonianSpec {
    Zero,
    /// `w a^dag a`.
    Number(f64),
    Diagonal(Vec<f64>),
    /// Constant `Omega a + conj(Omega) a^dag`, qubit only.
    Rabi(Complex64),
}

impl FromStr for HamiltonianSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || {
            CliError::Config(format!(
                "--hamiltonian: cannot parse '{s}' (zero, number:<w>, diag:<h0>:<h1>..., rabi:<re>:<im>)"
            ))
        };
        let mut parts = s.split(':');
        let kind = parts.next().unwrap_or("");
        let nums: Vec<f64> = parts.map(|x| x.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        if nums.iter().any(|x| !x.is_finite()) {
            return Err(bad());
        }
        match (kind, nums.as_slice()) {
            ("zero", []) => Ok(HamiltonianSpec::Zero),
            ("number", [w]) => Ok(HamiltonianSpec::Number(*w)),
            ("diag", v) if !v.is_empty() => Ok(HamiltonianSpec::Diagonal(v.to_vec())),
            ("rabi", [re, im]) => Ok(HamiltonianSpec::Rabi(Complex64::new(*re, *im))),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Rho0Spec {
    /// `|k><k|`.
    Basis(usize),
    /// `|+><+|` on levels 0 and 1.
    Plus,
    /// `I / d`.
    Mixed,
}

impl FromStr for Rho0Spec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "plus" => Ok(Rho0Spec::Plus),
            "mixed" => Ok(Rho0Spec::Mixed),
            _ => s
                .parse()
                .map(Rho0Spec::Basis)
                .map_err(|_| CliError::Config(format!("--rho0: expected a level index, 'plus' or 'mixed', got '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LindbladConfig {
    pub d: usize,
    pub gamma_decay: f64,
    pub gamma_dephase: f64,
    pub t_final: f64,
    pub steps: usize,
    pub rho0: Rho0Spec,
    pub hamiltonian: HamiltonianSpec,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedState {
    /// Index 1..=4 into `(|00>+|11>)`, `(|00>-|11>)`, `(|01>+|10>)`, `(|01>-|10>)`, each over `sqrt 2`.
    Bell(u8),
    /// `|01>`.
    Product,
    /// `p |bell1><bell1| + (1-p) I/4`.
    Werner(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementConfig {
    pub state: NamedState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorConfig {
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentParams {
    Rabi(RabiConfig),
    RwaError(RwaErrorConfig),
    Lindblad(LindbladConfig),
    Entanglement(EntanglementConfig),
    OscillatorCheck(OscillatorConfig),
}

/// A validated experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub params: ExperimentParams,
    /// `None` writes to standard output.
    pub output_path: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl ExperimentConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self, CliError> {
        let experiment: Experiment = raw.required::<String>("experiment")?.parse()?;
        for key in raw.values.keys() {
            let generic = matches!(key.as_str(), "experiment" | "out" | "seed");
            if !generic && !experiment.keys().contains(&key.as_str()) {
                log::warn!("parameter '{key}' is ignored by experiment {experiment}");
            }
        }
        let params = match experiment {
            Experiment::Rabi => ExperimentParams::Rabi(rabi(raw)?),
            Experiment::RwaError => ExperimentParams::RwaError(rwa_error(raw)?),
            Experiment::Lindblad => ExperimentParams::Lindblad(lindblad(raw)?),
            Experiment::Entanglement => ExperimentParams::Entanglement(entanglement(raw)?),
            Experiment::OscillatorCheck => {
                ExperimentParams::OscillatorCheck(OscillatorConfig { d: dimension("d", raw.required("d")?)? })
            }
        };
        Ok(Self { experiment, params, output_path: raw.get("out").map(PathBuf::from), seed: raw.parsed("seed")? })
    }
}

fn rabi(raw: &RawConfig) -> Result<RabiConfig, CliError> {
    let omega =
        Complex64::new(finite("omega-re", raw.or("omega-re", 0.0)?)?, finite("omega-im", raw.or("omega-im", 0.0)?)?);
    if omega.norm() == 0.0 {
        return Err(CliError::Config("Rabi frequency is zero: set --omega-re or --omega-im".into()));
    }
    let initial = raw.or("initial", 0usize)?;
    if initial > 1 {
        return Err(CliError::Config(format!("--initial must be 0 or 1, got {initial}")));
    }
    Ok(RabiConfig {
        omega,
        t_final: positive("T", raw.required("T")?)?,
        steps: steps("steps", raw.required("steps")?)?,
        initial,
    })
}

fn rwa_error(raw: &RawConfig) -> Result<RwaErrorConfig, CliError> {
    let omega = positive("omega", raw.required("omega")?)?;
    let t_final = positive("T", raw.required("T")?)?;
    let (n, step_source) = match raw.parsed("steps")? {
        Some(n) => (steps("steps", n)?, StepSource::User),
        None => (rwa_default_steps(omega, t_final), StepSource::Rule),
    };
    Ok(RwaErrorConfig {
        omega,
        t_final,
        steps: n,
        step_source,
        p: finite("p", raw.required("p")?)?,
        q: finite("q", raw.or("q", 0.0)?)?,
        d: dimension("d", raw.or("d", 2)?)?,
        xi: finite("xi", raw.or("xi", 0.0)?)?,
    })
}

fn lindblad(raw: &RawConfig) -> Result<LindbladConfig, CliError> {
    let d = dimension("d", raw.or("d", 2)?)?;
    let rho0: Rho0Spec = raw.or("rho0", Rho0Spec::Basis(1))?;
    if let Rho0Spec::Basis(k) = rho0 {
        if k >= d {
            return Err(CliError::Config(format!("--rho0 level {k} is out of range for d = {d}")));
        }
    }
    let hamiltonian: HamiltonianSpec = raw.or("hamiltonian", HamiltonianSpec::Zero)?;
    match &hamiltonian {
        HamiltonianSpec::Diagonal(v) if v.len() != d => {
            return Err(CliError::Config(format!("--hamiltonian diag needs {d} entries, got {}", v.len())))
        }
        HamiltonianSpec::Rabi(_) if d != 2 => return Err(CliError::Config("--hamiltonian rabi requires d = 2".into())),
        _ => {}
    }
    Ok(LindbladConfig {
        d,
        gamma_decay: nonnegative("gamma-decay", raw.or("gamma-decay", 0.0)?)?,
        gamma_dephase: nonnegative("gamma-dephase", raw.or("gamma-dephase", 0.0)?)?,
        t_final: positive("T", raw.required("T")?)?,
        steps: steps("steps", raw.required("steps")?)?,
        rho0,
        hamiltonian,
    })
}

fn entanglement(raw: &RawConfig) -> Result<EntanglementConfig, CliError> {
    let name: String = raw.required("state")?;
    let state = match name.as_str() {
        "bell1" => NamedState::Bell(1),
        "bell2" => NamedState::Bell(2),
        "bell3" => NamedState::Bell(3),
        "bell4" => NamedState::Bell(4),
        "product" => NamedState::Product,
        "werner" => {
            let p: f64 = raw.required("werner-p")?;
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::Config(format!("--werner-p must lie in [0, 1], got {p}")));
            }
            NamedState::Werner(p)
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown state '{other}' (expected bell1, bell2, bell3, bell4, product or werner)"
            )))
        }
    };
    Ok(EntanglementConfig { state })
}
