//! Command implementations behind the `csr` binary.
//!
//! Each command returns a serializable result; [`run`] routes it to stdout or
//! the `--out` file. Errors carry the process exit code: 2 for bad input or a
//! state that fails validation, 3 for file-system failures.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use csr_core::classical::{classical_baseline, dishonest_guess_fidelity, guess_formula, GuessStrategy};
use csr_core::fidelity::{f_max, DEFAULT_ZERO_EPS};
use csr_core::presets::Preset;
use csr_core::protocol::{expected_fidelity_mc, optimal_rotations, BranchDiagnostics};
use csr_core::sampling::{McEstimate, DEFAULT_SEED};
use csr_core::state_file::load_state;
use csr_core::wclass::{scatter_experiment, write_csv};
use csr_core::{full_report, DensityMatrix3Q, FidelityReport, Setting};
use serde::Serialize;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<csr_core::Error> for CliError {
    fn from(e: csr_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "csr", version, about = "Controlled state reconstruction experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form fidelity report for a resource state.
    Analyze(AnalyzeArgs),
    /// Closed form against a Monte-Carlo simulation of the protocol.
    Oracle(OracleArgs),
    /// W-class scatter of reconstruction vs teleportation fidelity (CSV).
    Scatter(ScatterArgs),
    /// Classical baseline and a lone shareholder's guess.
    Classical(ClassicalArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct StateSource {
    /// JSON state file with a `pure`, `dense` or `bloch` key.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Built-in state: ghz, w, wexample3, gamma-mix, delta-mix, beta-mix, mixed.
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: StateSource,
    /// Dealer, assistant and reconstructor qubits, in that order.
    #[arg(long, default_value = "ABC")]
    pub setting: String,
    /// Entries below this magnitude count as zero in the case label.
    #[arg(long, default_value_t = DEFAULT_ZERO_EPS)]
    pub epsilon: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub source: StateSource,
    #[arg(long, default_value = "ABC")]
    pub setting: String,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScatterArgs {
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassicalArgs {
    /// Probability that the dealer's second share is 1.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub p: f64,
    /// Guess of the lone shareholder: same or negate.
    #[arg(long, default_value = "same")]
    pub strategy: String,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn load_source(source: &StateSource) -> Result<DensityMatrix3Q, CliError> {
    match (&source.state, &source.preset) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
            Ok(load_state(&text)?)
        }
        (None, Some(name)) => Ok(name.parse::<Preset>()?.state()),
        _ => Err(CliError::Input("give exactly one of --state or --preset".into())),
    }
}

fn parse_setting(s: &str) -> Result<Setting, CliError> {
    Ok(s.parse::<Setting>()?)
}

pub fn cmd_analyze(rho: &DensityMatrix3Q, setting: &Setting, epsilon: f64) -> Result<FidelityReport, CliError> {
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(CliError::Input(format!("epsilon must be a non-negative number, got {epsilon}")));
    }
    Ok(full_report(rho, setting, epsilon)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub setting: Setting,
    /// Sphere-averaged fidelity of the optimal proper-rotation corrections.
    pub closed_form: f64,
    pub mc_mean: f64,
    pub mc_std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
    /// Upper bound reached when every branch attains its trace norm.
    pub f_max: f64,
    /// f_max − closed_form.
    pub so3_gap: f64,
    pub per_branch: Vec<BranchDiagnostics>,
}

pub fn cmd_oracle(
    rho: &DensityMatrix3Q,
    setting: &Setting,
    samples: usize,
    seed: u64,
) -> Result<OracleReport, CliError> {
    let d = rho.decompose()?;
    let plan = optimal_rotations(&d, setting);
    let run = expected_fidelity_mc(rho, setting, samples, seed)?;
    Ok(OracleReport {
        setting: *setting,
        closed_form: plan.so3_fidelity,
        mc_mean: run.estimate.mean,
        mc_std_error: run.estimate.std_error,
        n_samples: run.estimate.n_samples,
        seed,
        f_max: f_max(&d, setting),
        so3_gap: plan.so3_gap(),
        per_branch: run.per_branch,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassicalReport {
    pub p: f64,
    pub strategy: GuessStrategy,
    pub honest_baseline: McEstimate,
    pub guess_fidelity: McEstimate,
    pub formula_value: f64,
}

pub fn cmd_classical(p: f64, strategy: GuessStrategy, samples: usize, seed: u64) -> Result<ClassicalReport, CliError> {
    let guess_fidelity = dishonest_guess_fidelity(p, strategy, samples, seed)?;
    Ok(ClassicalReport {
        p,
        strategy,
        honest_baseline: classical_baseline(samples, seed)?,
        guess_fidelity,
        formula_value: guess_formula(p, strategy),
    })
}

/// CSV bytes for the W-class scatter.
pub fn cmd_scatter(samples: usize, seed: u64) -> Vec<u8> {
    let records = scatter_experiment(samples, seed);
    let mut buf = Vec::new();
    write_csv(&records, &mut buf).expect("writing to memory cannot fail");
    buf
}

fn emit(bytes: &[u8], out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, bytes).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
        }
        None => stdout
            .write_all(bytes)
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::Io(format!("writing stdout: {e}"))),
    }
}

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s.into_bytes()
}

fn to_usize(n: u64) -> Result<usize, CliError> {
    usize::try_from(n).map_err(|_| CliError::Input(format!("sample count {n} is too large")))
}

/// Executes one parsed invocation, writing results to `--out` or `stdout`.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze(a) => {
            let rho = load_source(&a.source)?;
            let report = cmd_analyze(&rho, &parse_setting(&a.setting)?, a.epsilon)?;
            emit(&json(&report), a.out.as_deref(), stdout)
        }
        Command::Oracle(a) => {
            let rho = load_source(&a.source)?;
            let report = cmd_oracle(&rho, &parse_setting(&a.setting)?, to_usize(a.samples)?, a.seed)?;
            emit(&json(&report), a.out.as_deref(), stdout)
        }
        Command::Scatter(a) => emit(&cmd_scatter(to_usize(a.samples)?, a.seed), a.out.as_deref(), stdout),
        Command::Classical(a) => {
            let strategy: GuessStrategy = a.strategy.parse()?;
            let report = cmd_classical(a.p, strategy, to_usize(a.samples)?, a.seed)?;
            emit(&json(&report), a.out.as_deref(), stdout)
        }
    }
}

/// Entry point shared by the binary: parses `args`, runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli, &mut io::stdout().lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("csr: {e}");
            e.exit_code()
        }
    }
}
