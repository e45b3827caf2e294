//! The `fluxgate` command line: run configuration, the `derive-params`,
//! `optimize`, `validate` and `report` subcommands, and exit codes.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 config error,
//! 3 non-convergence, 4 input mismatch, 5 missing data.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{FluxError, Result};
use crate::gates::{
    decoherence_rates_from_t1_t2, dissipative_error_eta_d, evaluate_eta, make_target, phase_optimized_error,
    GateName, GateTarget,
};
use crate::hamiltonian::{MultiLevelModel, PulseSequence, ReducedModel, WithoutDerivative, DEFAULT_DT};
use crate::io::{self, PulseEnvelope, ReportRow};
use crate::krotov::{
    default_initial_guess, optimize_gate, optimize_gate_dissipative, OptimizationConfig,
    OptimizationRun, Termination,
};
use crate::propagation::{evolve_populations, final_unitary, propagate_superoperator, BasisState, DecoherenceRates};
use crate::qubit_model::{compare_with_published, ghz, Device, PublishedComparison, QubitDesign, ReducedCoefficients};

/// Every parameter of the reference study, bundled into the binary.
pub const BUNDLED_DEFAULTS: &str = include_str!("../paper-defaults.json");

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;
pub const EXIT_MISSING: i32 = 5;

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "FLUXGATE_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitConfig {
    /// `E_J / h`, GHz.
    pub ej_ghz: f64,
    pub ej_over_ec: f64,
    pub alpha: f64,
    pub f_bias: f64,
}

impl QubitConfig {
    fn design(&self, index: u8) -> QubitDesign {
        QubitDesign {
            index,
            ej: ghz(self.ej_ghz),
            ej_over_ec: self.ej_over_ec,
            alpha: self.alpha,
            f_bias: self.f_bias,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateJob {
    pub gate: GateName,
    /// Gate time, ns.
    #[serde(rename = "T")]
    pub gate_time: f64,
}

/// Dissipative refinement run after the unitary optimum is found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RefineConfig {
    pub enabled: bool,
    pub shape_over_weight: f64,
    pub max_iterations: usize,
}

impl Default for RefineConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            shape_over_weight: 1e-8,
            max_iterations: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoherenceConfig {
    pub t1_us: f64,
    pub t2_us: f64,
    #[serde(default)]
    pub refine: RefineConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub qubits: [QubitConfig; 2],
    pub mutual_inductance_ph: f64,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "default_levels")]
    pub levels: usize,
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub gates: Vec<GateJob>,
    #[serde(default)]
    pub optimization: OptimizationConfig,
    #[serde(default)]
    pub decoherence: Option<DecoherenceConfig>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_n_max() -> usize {
    crate::qubit_model::DEFAULT_CUTOFF
}

fn default_levels() -> usize {
    crate::hamiltonian::MULTI_LEVELS
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("runs")
}

fn config_error(path: &str, e: FluxError) -> FluxError {
    match e {
        FluxError::InvalidParameter { name, reason } => FluxError::Config {
            path: format!("{path}.{name}"),
            message: reason,
        },
        other => FluxError::Config {
            path: path.to_string(),
            message: other.to_string(),
        },
    }
}

impl RunConfig {
    pub fn bundled_defaults() -> Self {
        Self::parse(BUNDLED_DEFAULTS).expect("bundled defaults are valid")
    }

    /// Parse and validate a config document.
    pub fn parse(text: &str) -> Result<Self> {
        let config: Self = io::parse_json(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| FluxError::Config {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn designs(&self) -> [QubitDesign; 2] {
        [self.qubits[0].design(1), self.qubits[1].design(2)]
    }

    pub fn validate(&self) -> Result<()> {
        for (l, d) in self.designs().iter().enumerate() {
            d.validate().map_err(|e| config_error(&format!("qubits[{l}]"), e))?;
        }
        if !(self.mutual_inductance_ph.is_finite() && self.mutual_inductance_ph > 0.0) {
            return Err(config_error("mutual_inductance_ph", FluxError::param("value", "must be positive")));
        }
        if self.levels < 2 {
            return Err(config_error("levels", FluxError::param("value", "must be at least 2")));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(config_error("dt", FluxError::param("value", "must be positive")));
        }
        if self.gates.is_empty() {
            return Err(config_error("gates", FluxError::param("value", "list is empty")));
        }
        for (i, job) in self.gates.iter().enumerate() {
            if !(job.gate_time.is_finite() && job.gate_time >= self.dt) {
                return Err(config_error(&format!("gates[{i}].T"), FluxError::param("value", "must be at least dt")));
            }
        }
        self.optimization.validate().map_err(|e| config_error("optimization", e))?;
        if let Some(d) = &self.decoherence {
            decoherence_rates_from_t1_t2(d.t1_us, d.t2_us).map_err(|e| config_error("decoherence", e))?;
        }
        Ok(())
    }

    pub fn rates(&self) -> Option<DecoherenceRates> {
        self.decoherence
            .as_ref()
            .map(|d| decoherence_rates_from_t1_t2(d.t1_us, d.t2_us).expect("validated"))
    }

    /// Gate time for `gate`: the config entry, else the reference value.
    pub fn gate_time(&self, gate: GateName) -> f64 {
        self.gates
            .iter()
            .find(|j| j.gate == gate)
            .map_or(gate.default_time(), |j| j.gate_time)
    }
}

/// Derived models shared by every subcommand.
pub struct Session {
    pub config: RunConfig,
    pub device: Device,
    pub reduced: ReducedModel,
    pub multilevel: MultiLevelModel,
}

impl Session {
    pub fn new(config: RunConfig) -> Result<Self> {
        let [q1, q2] = config.designs();
        let device = Device::derive(&q1, &q2, config.mutual_inductance_ph, config.n_max, config.levels)?;
        let reduced = ReducedModel::simplified(device.coefficients.clone());
        let multilevel = MultiLevelModel::from_device(&device, config.levels)?;
        Ok(Self {
            config,
            device,
            reduced,
            multilevel,
        })
    }
}

#[derive(Debug, Parser)]
#[command(name = "fluxgate", version, about = "Flux-pulse synthesis of X, Z and CNOT gates on coupled flux qubits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Run configuration (JSON); the bundled reference parameters if omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `output_dir` from the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GateArg {
    /// Gate name (Z1, X1, Z2, X2, CNOT12, CNOT21, I).
    #[arg(value_name = "GATE")]
    pub positional: Option<String>,
    #[arg(long = "gate", conflicts_with = "positional")]
    pub flag: Option<String>,
}

impl GateArg {
    fn parse(&self) -> Result<Option<GateName>> {
        self.positional
            .as_ref()
            .or(self.flag.as_ref())
            .map(|s| s.parse())
            .transpose()
            .map_err(|e| config_error("--gate", e))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derive the reduced coefficients and compare with the published values.
    DeriveParams {
        #[command(flatten)]
        common: CommonArgs,
        /// Plane-wave cutoff; when it differs from the config, the drift
        /// against the config cutoff is reported too.
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Synthesize pulses for one gate or every gate in the config.
    Optimize {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        gate: GateArg,
        /// Gate time, ns.
        #[arg(long = "T")]
        gate_time: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        max_iterations: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Score a pulse file on the reduced, multi-level and dissipative models.
    Validate {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        gate: GateArg,
        /// Pulse CSV or JSON envelope.
        #[arg(long)]
        pulses: PathBuf,
        /// Expected gate time, ns.
        #[arg(long = "T")]
        gate_time: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Collect per-gate runs into `report.json` and `report.csv`.
    Report {
        #[command(flatten)]
        common: CommonArgs,
        /// Directory holding one subdirectory per gate.
        run_dir: Option<PathBuf>,
    },
}

/// Map an error to its process exit code.
pub fn exit_code(e: &FluxError) -> i32 {
    match e {
        FluxError::Config { .. }
        | FluxError::Json(_)
        | FluxError::InvalidParameter { .. }
        | FluxError::UnknownGate(_)
        | FluxError::CutoffTooSmall { .. }
        | FluxError::TooManyLevels { .. } => EXIT_CONFIG,
        FluxError::GridMismatch(_) | FluxError::DimensionMismatch { .. } | FluxError::TooFewSamples { .. } => {
            EXIT_MISMATCH
        }
        FluxError::MissingData(_) => EXIT_MISSING,
        _ => EXIT_FAILURE,
    }
}

fn load_config(common: &CommonArgs) -> Result<RunConfig> {
    let mut config = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::bundled_defaults(),
    };
    if let Some(out) = &common.out {
        config.output_dir = out.clone();
    }
    Ok(config)
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw.trim().parse().map_err(|_| FluxError::Config {
            path: THREADS_ENV.to_string(),
            message: format!("`{raw}` is not a thread count"),
        })?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| FluxError::Config {
        path: THREADS_ENV.to_string(),
        message: e.to_string(),
    })
}

/// Run a parsed command line and return the exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::DeriveParams { common, n_max } => {
            let config = load_config(&common)?;
            let out = derive_params(&config, n_max)?;
            print!("{}", format_derive_table(&out));
            let path = config.output_dir.join("coefficients.json");
            io::write_json(&path, &out)?;
            info!("wrote {}", path.display());
            Ok(EXIT_OK)
        }
        Command::Optimize {
            common,
            gate,
            gate_time,
            dt,
            max_iterations,
            seed,
        } => {
            let mut config = load_config(&common)?;
            if let Some(dt) = dt {
                config.dt = dt;
            }
            if let Some(n) = max_iterations {
                config.optimization.max_iterations = n;
            }
            if seed.is_some() {
                config.seed = seed;
            }
            let gate = gate.parse()?;
            let jobs: Vec<GateJob> = match gate {
                Some(g) => vec![GateJob {
                    gate: g,
                    gate_time: gate_time.unwrap_or_else(|| config.gate_time(g)),
                }],
                None => config
                    .gates
                    .iter()
                    .map(|j| GateJob {
                        gate: j.gate,
                        gate_time: gate_time.unwrap_or(j.gate_time),
                    })
                    .collect(),
            };
            config.gates = jobs;
            config.validate()?;
            let session = Session::new(config)?;
            let records = optimize_all(&session)?;
            for r in &records {
                println!(
                    "{:<7} T = {} ns  iterations = {:>6}  η = {:.3e}  converged = {}",
                    r.gate.as_str(),
                    r.gate_time_ns,
                    r.iterations,
                    r.eta,
                    r.converged
                );
            }
            Ok(if records.iter().all(|r| r.converged) {
                EXIT_OK
            } else {
                EXIT_NOT_CONVERGED
            })
        }
        Command::Validate {
            common,
            gate,
            pulses,
            gate_time,
            dt,
        } => {
            let mut config = load_config(&common)?;
            if let Some(dt) = dt {
                config.dt = dt;
            }
            let gate = gate.parse()?.ok_or_else(|| FluxError::Config {
                path: "--gate".into(),
                message: "a gate is required".into(),
            })?;
            let sequence = read_pulse_file(&pulses)?;
            let out = common
                .out
                .clone()
                .unwrap_or_else(|| pulses.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf));
            let session = Session::new(config)?;
            let record = validate(&session, gate, &sequence, gate_time, &out)?;
            println!(
                "{}: η = {:.3e}  η_P = {:.3e}  η_D = {}",
                gate,
                record.eta,
                record.eta_p,
                record.eta_d.map_or("-".to_string(), |v| format!("{v:.3e}"))
            );
            Ok(EXIT_OK)
        }
        Command::Report { common, run_dir } => {
            let dir = match run_dir {
                Some(d) => d,
                None => load_config(&common)?.output_dir,
            };
            let rows = report(&dir)?;
            for r in &rows {
                println!("{:<7} {:>4} ns  η = {:.3e}", r.gate, r.gate_time_ns, r.eta);
            }
            Ok(EXIT_OK)
        }
    }
}

/// Coefficients plus the comparison table written by `derive-params`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeriveOutput {
    pub n_max: usize,
    pub coefficients: ReducedCoefficients,
    pub comparison: Vec<PublishedComparison>,
    /// Cutoff the drift is measured against, when it differs from `n_max`.
    pub reference_n_max: Option<usize>,
    /// `|x(n_max) − x(reference)| / |x(reference)|` per compared quantity.
    pub cutoff_drift: Option<BTreeMap<String, f64>>,
}

pub fn derive_params(config: &RunConfig, n_max: Option<usize>) -> Result<DeriveOutput> {
    let [q1, q2] = config.designs();
    let derive = |n: usize| Device::derive(&q1, &q2, config.mutual_inductance_ph, n, 2).map(|d| d.coefficients);
    let n = n_max.unwrap_or(config.n_max);
    let coefficients = derive(n)?;
    let comparison = compare_with_published(&coefficients);
    let (reference_n_max, cutoff_drift) = if n != config.n_max {
        let base = compare_with_published(&derive(config.n_max)?);
        let drift = comparison
            .iter()
            .zip(&base)
            .map(|(a, b)| (a.quantity.clone(), ((a.derived_ghz - b.derived_ghz) / b.derived_ghz).abs()))
            .collect();
        (Some(config.n_max), Some(drift))
    } else {
        (None, None)
    };
    Ok(DeriveOutput {
        n_max: n,
        coefficients,
        comparison,
        reference_n_max,
        cutoff_drift,
    })
}

pub fn format_derive_table(out: &DeriveOutput) -> String {
    let mut s = format!(
        "{:<16} {:>14} {:>12} {:>10}{}\n",
        "quantity",
        "derived (GHz)",
        "published",
        "rel. dev.",
        if out.cutoff_drift.is_some() { "      drift" } else { "" }
    );
    for row in &out.comparison {
        s += &format!(
            "{:<16} {:>14.6e} {:>12.4e} {:>10.3e}",
            row.quantity, row.derived_ghz, row.published_ghz, row.relative_deviation
        );
        if let Some(d) = &out.cutoff_drift {
            s += &format!(" {:>10.3e}", d[&row.quantity]);
        }
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DissipativeRecord {
    pub t1_us: f64,
    pub t2_us: f64,
    pub initial_eta_d: f64,
    #[serde(rename = "eta_D")]
    pub eta_d: f64,
    pub iterations: usize,
    pub termination: Termination,
}

/// Summary written to `run.json` for each optimized gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub gate: GateName,
    pub gate_time_ns: f64,
    pub dt: f64,
    pub n_steps: usize,
    pub seed: Option<u64>,
    pub converged: bool,
    pub termination: Termination,
    pub iterations: usize,
    pub initial_eta: f64,
    pub eta: f64,
    pub shape_over_weight: f64,
    pub dissipative: Option<DissipativeRecord>,
}

pub fn gate_dir(root: &Path, gate: GateName) -> PathBuf {
    root.join(gate.as_str())
}

fn write_pulses(dir: &Path, stem: &str, pulses: &PulseSequence, meta: BTreeMap<String, serde_json::Value>) -> Result<()> {
    io::write_pulses_csv(&dir.join(format!("{stem}.csv")), pulses)?;
    io::write_json(&dir.join(format!("{stem}.json")), &PulseEnvelope::new(pulses, meta))
}

/// Optimize one gate and write its artifacts under `<output_dir>/<gate>/`.
pub fn optimize_job(session: &Session, job: &GateJob) -> Result<RunRecord> {
    let config = &session.config;
    let target = make_target(job.gate);
    let guess = default_initial_guess(&session.reduced.coeffs, job.gate_time, config.dt, config.seed)?;
    info!("{}: optimizing over {} steps", job.gate, guess.n_steps());
    let run = optimize_gate(&session.reduced, &target, &config.optimization, &guess)?;
    let dir = gate_dir(&config.output_dir, job.gate);
    let mut record = RunRecord {
        gate: job.gate,
        gate_time_ns: job.gate_time,
        dt: run.final_pulses.dt,
        n_steps: run.final_pulses.n_steps(),
        seed: config.seed,
        converged: run.converged,
        termination: run.termination.clone(),
        iterations: run.history.len(),
        initial_eta: run.initial_eta,
        eta: run.final_eta(),
        shape_over_weight: run.shape_over_weight,
        dissipative: None,
    };
    write_run(&dir, "pulses", "history", &run, &record)?;

    if let (Some(d), Some(rates), true) = (&config.decoherence, config.rates(), run.converged) {
        if d.refine.enabled {
            let refined = refine_dissipative(&session.reduced, &target, &rates, &d.refine, &run.final_pulses)?;
            record.dissipative = Some(DissipativeRecord {
                t1_us: d.t1_us,
                t2_us: d.t2_us,
                initial_eta_d: refined.initial_eta,
                eta_d: refined.final_eta(),
                iterations: refined.history.len(),
                termination: refined.termination.clone(),
            });
            write_run(&dir, "pulses_dissipative", "history_dissipative", &refined, &record)?;
        }
    }
    io::write_json(&dir.join("run.json"), &record)?;
    Ok(record)
}

fn write_run(dir: &Path, pulses: &str, history: &str, run: &OptimizationRun, record: &RunRecord) -> Result<()> {
    let mut meta = BTreeMap::new();
    meta.insert("gate".to_string(), serde_json::json!(record.gate));
    meta.insert("gate_time_ns".to_string(), serde_json::json!(record.gate_time_ns));
    meta.insert("eta".to_string(), serde_json::json!(run.final_eta()));
    meta.insert("converged".to_string(), serde_json::json!(run.converged));
    write_pulses(dir, pulses, &run.final_pulses, meta)?;
    io::write_history_csv(&dir.join(format!("{history}.csv")), &run.history)
}

/// Warm-started dissipative Krotov with automatic step halving.
pub fn refine_dissipative(
    model: &ReducedModel,
    target: &GateTarget,
    rates: &DecoherenceRates,
    refine: &RefineConfig,
    start: &PulseSequence,
) -> Result<OptimizationRun> {
    let config = OptimizationConfig {
        shape_over_weight: refine.shape_over_weight,
        max_iterations: refine.max_iterations,
        stop_error: 1e-12,
        halve_on_increase: true,
        ..OptimizationConfig::default()
    };
    optimize_gate_dissipative(model, target, rates, &config, start)
}

/// Optimize every gate of the session's config on the worker pool.
pub fn optimize_all(session: &Session) -> Result<Vec<RunRecord>> {
    let pool = thread_pool()?;
    pool.install(|| session.config.gates.par_iter().map(|job| optimize_job(session, job)).collect())
}

pub fn read_pulse_file(path: &Path) -> Result<PulseSequence> {
    if !path.exists() {
        return Err(FluxError::MissingData(path.to_path_buf()));
    }
    if path.extension().is_some_and(|e| e == "json") {
        io::read_json::<PulseEnvelope>(path)?.pulses()
    } else {
        io::read_pulses_csv(path)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthTableEntry {
    pub initial: BasisState,
    pub expected: BasisState,
    /// Final population of `expected` on the multi-level model.
    pub population: f64,
    pub leakage: f64,
}

/// Contents of `validation.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationRecord {
    pub gate: GateName,
    pub gate_time_ns: f64,
    pub dt: f64,
    pub n_steps: usize,
    pub eta: f64,
    /// `min_φ η(e^{iφ}U)` against the literal gate matrix.
    pub eta_phase_optimized: f64,
    #[serde(rename = "eta_P")]
    pub eta_p: f64,
    /// `η_P` with the `ḟ_c · P_P` term removed from the multi-level model.
    #[serde(rename = "eta_P_without_fdot")]
    pub eta_p_without_fdot: f64,
    #[serde(rename = "eta_D")]
    pub eta_d: Option<f64>,
    pub truth_table: Vec<TruthTableEntry>,
}

/// The computational state a gate sends `initial` to.
pub fn expected_output(gate: GateName, initial: BasisState) -> BasisState {
    let target = make_target(gate);
    let col = initial.position();
    let row = (0..4)
        .max_by(|&a, &b| target.literal[(a, col)].norm().total_cmp(&target.literal[(b, col)].norm()))
        .expect("4 rows");
    BasisState::ALL[row]
}

/// Score `pulses` for `gate` and write `validation.json` and the traces.
pub fn validate(
    session: &Session,
    gate: GateName,
    pulses: &PulseSequence,
    gate_time: Option<f64>,
    out: &Path,
) -> Result<ValidationRecord> {
    let dt = session.config.dt;
    if (pulses.dt - dt).abs() > 1e-9 * dt {
        return Err(FluxError::GridMismatch(format!("pulse dt {} ns, config dt {} ns", pulses.dt, dt)));
    }
    if let Some(t) = gate_time {
        if (pulses.duration() - t).abs() > 0.5 * dt {
            return Err(FluxError::GridMismatch(format!("pulses last {} ns, expected {} ns", pulses.duration(), t)));
        }
    }
    let target = make_target(gate);
    let ml = &session.multilevel;
    let u = final_unitary(&session.reduced, pulses)?;
    let eta = crate::gates::gate_error_eta(&u, &target.matrix)?;
    let eta_phase_optimized = phase_optimized_error(&u, &target.literal)?;
    let eta_p = evaluate_eta(ml, pulses, &target)?;
    let eta_p_without_fdot = evaluate_eta(&WithoutDerivative(ml), pulses, &target)?;
    let eta_d = match session.config.rates() {
        Some(rates) => {
            let g = propagate_superoperator(&session.reduced, pulses, &rates)?;
            Some(dissipative_error_eta_d(g.final_propagator(), &target)?)
        }
        None => None,
    };

    let traces: Vec<_> = BasisState::ALL
        .par_iter()
        .map(|&b| evolve_populations(ml, pulses, b))
        .collect::<Result<_>>()?;
    let mut truth_table = Vec::with_capacity(4);
    for tr in &traces {
        io::write_traces_csv(&out.join(format!("traces_{}.csv", tr.initial.label())), tr)?;
        let expected = expected_output(gate, tr.initial);
        let last = tr.final_row();
        truth_table.push(TruthTableEntry {
            initial: tr.initial,
            expected,
            population: last[expected.position()],
            leakage: last[4],
        });
    }
    let record = ValidationRecord {
        gate,
        gate_time_ns: pulses.duration(),
        dt: pulses.dt,
        n_steps: pulses.n_steps(),
        eta,
        eta_phase_optimized,
        eta_p,
        eta_p_without_fdot,
        eta_d,
        truth_table,
    };
    io::write_json(&out.join("validation.json"), &record)?;
    Ok(record)
}

/// Build `report.json` and `report.csv` from the runs under `dir`.
///
/// `η_P` comes from `validation.json`; `η_D` from the dissipative
/// refinement when one ran, else from `validation.json`.
pub fn report(dir: &Path) -> Result<Vec<ReportRow>> {
    let entries = std::fs::read_dir(dir).map_err(|_| FluxError::MissingData(dir.to_path_buf()))?;
    let mut found: Vec<(RunRecord, Option<ValidationRecord>)> = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| FluxError::io(dir, e))?.path();
        let run_path = path.join("run.json");
        if !run_path.is_file() {
            continue;
        }
        let run: RunRecord = io::read_json(&run_path)?;
        let validation_path = path.join("validation.json");
        let validation = if validation_path.is_file() {
            Some(io::read_json(&validation_path)?)
        } else {
            None
        };
        found.push((run, validation));
    }
    if found.is_empty() {
        return Err(FluxError::MissingData(dir.to_path_buf()));
    }
    found.sort_by_key(|(run, _)| run.gate);
    let rows: Vec<ReportRow> = found
        .iter()
        .map(|(run, v)| ReportRow {
            gate: run.gate.to_string(),
            gate_time_ns: run.gate_time_ns,
            eta: run.eta,
            eta_p: v.as_ref().map(|v| v.eta_p),
            eta_d: run
                .dissipative
                .as_ref()
                .map(|d| d.eta_d)
                .or_else(|| v.as_ref().and_then(|v| v.eta_d)),
        })
        .collect();
    io::write_json(&dir.join("report.json"), &rows)?;
    io::write_report_csv(&dir.join("report.csv"), &rows)?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_defaults_describe_the_reference_circuit() {
        let c = RunConfig::bundled_defaults();
        let (q1, q2, m) = crate::qubit_model::reference_designs();
        let [d1, d2] = c.designs();
        assert_eq!(d1, q1);
        assert!((d2.ej - q2.ej).abs() <= 1e-12 * q2.ej);
        assert_eq!(c.mutual_inductance_ph, m);
        let gates: Vec<_> = c.gates.iter().map(|j| j.gate).collect();
        assert_eq!(gates, GateName::REFERENCE_SUITE);
        for j in &c.gates {
            assert_eq!(j.gate_time, j.gate.default_time());
        }
        assert!(c.rates().is_some());
    }

    #[test]
    fn malformed_config_reports_the_path() {
        let mut v: serde_json::Value = serde_json::from_str(BUNDLED_DEFAULTS).unwrap();
        v["qubits"][1]["alpha"] = serde_json::json!("big");
        let err = RunConfig::parse(&v.to_string()).unwrap_err();
        assert_eq!(exit_code(&err), EXIT_CONFIG);
        assert!(err.to_string().contains("qubits[1].alpha"), "{err}");

        v["qubits"][1]["alpha"] = serde_json::json!(-1.0);
        let err = RunConfig::parse(&v.to_string()).unwrap_err();
        assert!(err.to_string().contains("qubits[1].alpha"), "{err}");

        let err = RunConfig::parse(r#"{"qubits": [], "bogus": 1}"#).unwrap_err();
        assert_eq!(exit_code(&err), EXIT_CONFIG);
    }

    #[test]
    fn unknown_gate_and_bad_times_are_config_errors() {
        let mut v: serde_json::Value = serde_json::from_str(BUNDLED_DEFAULTS).unwrap();
        v["gates"][0]["gate"] = serde_json::json!("Y1");
        assert_eq!(exit_code(&RunConfig::parse(&v.to_string()).unwrap_err()), EXIT_CONFIG);
        v["gates"][0] = serde_json::json!({"gate": "Z1", "T": -1.0});
        let err = RunConfig::parse(&v.to_string()).unwrap_err();
        assert!(err.to_string().contains("gates[0].T"));
        v["gates"][0] = serde_json::json!({"gate": "Z1", "T": 0.8});
        v["decoherence"]["t2_us"] = serde_json::json!(30.0);
        assert!(RunConfig::parse(&v.to_string()).unwrap_err().to_string().contains("decoherence"));
    }

    #[test]
    fn expected_outputs_follow_the_truth_tables() {
        use BasisState::*;
        assert_eq!(expected_output(GateName::X1, Gg), Eg);
        assert_eq!(expected_output(GateName::X2, Eg), Ee);
        assert_eq!(expected_output(GateName::Z1, Ge), Ge);
        assert_eq!(expected_output(GateName::Cnot12, Eg), Ee);
        assert_eq!(expected_output(GateName::Cnot12, Ge), Ge);
        assert_eq!(expected_output(GateName::Cnot21, Ge), Ee);
        assert_eq!(expected_output(GateName::Cnot21, Eg), Eg);
    }

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(exit_code(&FluxError::GridMismatch("x".into())), EXIT_MISMATCH);
        assert_eq!(exit_code(&FluxError::MissingData(PathBuf::from("d"))), EXIT_MISSING);
        assert_eq!(exit_code(&FluxError::EigenNotConverged { residuals: vec![] }), EXIT_FAILURE);
    }

    #[test]
    fn empty_run_directory_is_missing_data() {
        let d = tempfile::tempdir().unwrap();
        assert!(matches!(report(d.path()), Err(FluxError::MissingData(_))));
        assert!(matches!(report(&d.path().join("absent")), Err(FluxError::MissingData(_))));
    }
}
