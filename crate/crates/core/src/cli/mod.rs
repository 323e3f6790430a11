//! The `qcs` command-line front end.
//!
//! Every subcommand writes line-delimited JSON records in `--format json`
//! mode. Each record carries `schema_version` and `command`. Exit codes are
//! `0` on success, `1` on a domain error and `2` on a usage error.

pub mod reproduce;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::avg_case::{
    certificate_verify, count_accepting_certificates, find_certificate, gap_from_quasi_avg_oracle, sb_acceptance_exact,
    sb_report, GapOracle,
};
use crate::circuits::{
    adversarial_robustness, algorithm_a, build_iqp, build_qaoa, distribution_error, iqp_gap_amplitude,
    iqp_shifted_amplitude, qaoa_acceptance, qaoa_constraint_bound, qaoa_kappa, teleport_gadget_column, ExactProvider,
    SgapThresholds, TableProvider,
};
use crate::error::{Error, Result};
use crate::estimator::{
    conjecture_weakening, estimate, format_table, headline_table, EstimateParams, Model, Weakening, CENTURY_SECONDS,
    DEFAULT_BUDGET, DEFAULT_FLOPS,
};
use crate::gap_stats::{
    count_condition_subspaces, count_matrix_solutions, exact_moment, gap_histogram, mass_poly, mass_poly_grid_excess,
    promise_stats, sampled_moment, sgap_classify, sgap_label_from_gap, SgapLabel,
};
use crate::limits::Limits;
use crate::linops::{
    default_scale, encode_permanent_with, fock_amplitude, herm_eig, permanent_naive, permanent_naive_int,
    permanent_ryser, permanent_ryser_int, permanent_sparse_int, spectral_norm, ComplexMatrix, FockConfig, IntMatrix,
};
use crate::lptwy::{count_ones_lptwy_report, monomial_bound_check};
use crate::poly3::Poly3;
use crate::statevector::Circuit;
use crate::valiant::{build_graph, verify_reduction, SPARSE_STATE_CAP};

/// Version stamped on every structured record.
pub const SCHEMA_VERSION: u32 = 1;

/// Canonical subcommand names.
pub const SUBCOMMANDS: [&str; 16] = [
    "gap",
    "count",
    "simulate",
    "iqp",
    "qaoa",
    "sgap-classify",
    "harness-a",
    "permanent",
    "boson-encode",
    "fock-amp",
    "reduce",
    "stats",
    "avg-reduce",
    "sb-accept",
    "estimate",
    "reproduce",
];

/// Public library operation and the one subcommand that exposes it.
pub const REGISTRY: &[(&str, &str)] = &[
    ("poly3::Poly3::parse", "gap"),
    ("poly3::Poly3::from_json", "gap"),
    ("poly3::Poly3::gap_bruteforce", "gap"),
    ("poly3::Poly3::gap_pointwise", "gap"),
    ("poly3::Poly3::zeros_count", "gap"),
    ("lptwy::count_ones_lptwy_report", "count"),
    ("lptwy::monomial_bound_check", "count"),
    ("poly3::Poly3::ones_count", "count"),
    ("statevector::Circuit::from_json", "simulate"),
    ("statevector::StateVector::amplitude", "simulate"),
    ("statevector::StateVector::full_distribution", "simulate"),
    ("statevector::StateVector::sample_many", "simulate"),
    ("circuits::build_iqp", "iqp"),
    ("circuits::iqp_gap_amplitude", "iqp"),
    ("circuits::iqp_shifted_amplitude", "iqp"),
    ("circuits::build_qaoa", "qaoa"),
    ("circuits::qaoa_acceptance", "qaoa"),
    ("circuits::qaoa_kappa", "qaoa"),
    ("circuits::teleport_gadget_column", "qaoa"),
    ("gap_stats::sgap_classify", "sgap-classify"),
    ("circuits::SgapThresholds::new", "sgap-classify"),
    ("circuits::algorithm_a", "harness-a"),
    ("circuits::adversarial_robustness", "harness-a"),
    ("circuits::distribution_error", "harness-a"),
    ("linops::permanent_naive", "permanent"),
    ("linops::permanent_naive_int", "permanent"),
    ("linops::permanent_ryser", "permanent"),
    ("linops::permanent_ryser_int", "permanent"),
    ("linops::permanent_sparse_int", "permanent"),
    ("linops::dilate", "boson-encode"),
    ("linops::encode_permanent_with", "boson-encode"),
    ("linops::default_scale", "boson-encode"),
    ("linops::spectral_norm", "boson-encode"),
    ("linops::herm_eig", "boson-encode"),
    ("linops::fock_amplitude", "fock-amp"),
    ("valiant::build_graph", "reduce"),
    ("valiant::verify_reduction", "reduce"),
    ("valiant::gadget_permanent", "reduce"),
    ("gap_stats::exact_moment", "stats"),
    ("gap_stats::sampled_moment", "stats"),
    ("gap_stats::count_matrix_solutions", "stats"),
    ("gap_stats::count_condition_subspaces", "stats"),
    ("gap_stats::mass_poly", "stats"),
    ("gap_stats::mass_poly_grid_excess", "stats"),
    ("gap_stats::promise_stats", "stats"),
    ("gap_stats::gap_histogram", "stats"),
    ("avg_case::gap_from_quasi_avg_oracle", "avg-reduce"),
    ("avg_case::GapOracle::corrupted", "avg-reduce"),
    ("avg_case::find_certificate", "avg-reduce"),
    ("avg_case::certificate_verify", "avg-reduce"),
    ("avg_case::count_accepting_certificates", "avg-reduce"),
    ("avg_case::sb_report", "sb-accept"),
    ("avg_case::sb_acceptance_exact", "sb-accept"),
    ("estimator::estimate", "estimate"),
    ("estimator::conjecture_weakening", "estimate"),
    ("estimator::headline_table", "estimate"),
    ("cli::reproduce::reproduce_all", "reproduce"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    /// Line-delimited JSON records.
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "qcs", version, about = "Gap counting, circuit encodings, permanents and qubit-count estimates")]
struct Cli {
    /// Worker threads (defaults to `QCS_THREADS`, then the core count).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Cap override such as `ryser-dim=25`; repeatable.
    #[arg(long = "cap", global = true, value_name = "NAME=VALUE")]
    caps: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact gap and zero count of a polynomial.
    Gap(GapArgs),
    /// Count satisfying assignments by brute force or the modular algorithm.
    Count(CountArgs),
    /// Run a circuit file on the state-vector simulator.
    Simulate(SimulateArgs),
    /// IQP encoding of a polynomial.
    Iqp(IqpArgs),
    /// QAOA encoding of a polynomial.
    Qaoa(QaoaArgs),
    /// Promise-gap label of a polynomial.
    SgapClassify(PolyArg),
    /// Decision procedure driven by output probabilities.
    HarnessA(HarnessArgs),
    /// Permanent of a matrix file.
    Permanent(PermanentArgs),
    /// Embed a matrix in a unitary and read its permanent off a Fock amplitude.
    BosonEncode(BosonArgs),
    /// Transition amplitude between Fock configurations.
    FockAmp(FockArgs),
    /// Cycle-cover gadget graph of a polynomial.
    Reduce(ReduceArgs),
    /// Statistics of the gap distribution.
    Stats(StatsArgs),
    /// Gap recovery through a quasi-average-case oracle.
    AvgReduce(AvgReduceArgs),
    /// Acceptance probability of the query algorithm against its thresholds.
    SbAccept(SbArgs),
    /// Qubit counts from conjectured lower bounds.
    Estimate(EstimateArgs),
    /// Regenerate every acceptance table into a directory.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Args)]
struct PolyArg {
    /// Polynomial file: canonical JSON or the text grammar.
    #[arg(long)]
    poly: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GapMethod {
    Brute,
    Pointwise,
}

#[derive(Debug, Args)]
struct GapArgs {
    #[arg(long)]
    poly: PathBuf,
    #[arg(long, value_enum, default_value_t = GapMethod::Brute)]
    method: GapMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountMethod {
    Brute,
    Lptwy,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[arg(long, required_unless_present = "bound_n")]
    poly: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = CountMethod::Lptwy)]
    method: CountMethod,
    #[arg(long = "free-vars", default_value_t = 1)]
    free_vars: usize,
    /// Check the monomial-count bound at this `n` instead of counting.
    #[arg(long = "bound-n", conflicts_with = "poly")]
    bound_n: Option<u64>,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("sim_mode").required(true).args(["amplitude", "distribution", "samples"])))]
struct SimulateArgs {
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long)]
    amplitude: Option<usize>,
    #[arg(long)]
    distribution: bool,
    #[arg(long, requires = "seed")]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("iqp_mode").required(true).args(["amplitude", "shifted", "distribution"])))]
struct IqpArgs {
    #[arg(long)]
    poly: PathBuf,
    /// `⟨0|U_f|0⟩` and `2^n` times it.
    #[arg(long)]
    amplitude: bool,
    /// Amplitude of `C_{f̄}` at the linear-part mask of `f`.
    #[arg(long)]
    shifted: bool,
    #[arg(long)]
    distribution: bool,
    /// Write the circuit in the structured circuit format.
    #[arg(long = "emit-circuit")]
    emit_circuit: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct QaoaArgs {
    #[arg(long)]
    poly: PathBuf,
    #[arg(long)]
    acceptance: bool,
    /// Also print the teleportation gadget columns.
    #[arg(long)]
    gadget: bool,
    #[arg(long = "emit-circuit")]
    emit_circuit: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Adversary {
    /// Cheapest-first flips under the ℓ₁ budget.
    Greedy,
    /// Random mixing with the given ℓ₁ budget.
    Random,
}

#[derive(Debug, Args)]
struct HarnessArgs {
    #[arg(long)]
    poly: PathBuf,
    /// ℓ₁ perturbation budget over the class of the polynomial.
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    #[arg(long, value_enum, default_value_t = Adversary::Greedy)]
    adversary: Adversary,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PermMethod {
    Naive,
    Ryser,
    Sparse,
}

#[derive(Debug, Args)]
struct PermanentArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, value_enum, default_value_t = PermMethod::Ryser)]
    method: PermMethod,
}

#[derive(Debug, Args)]
struct BosonArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// Scale factor; defaults to `1/(2·max(1, ‖A‖))`.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long = "emit-unitary")]
    emit_unitary: Option<PathBuf>,
    /// Also print the eigenvalues of `A†A`.
    #[arg(long)]
    spectrum: bool,
}

#[derive(Debug, Args)]
struct FockArgs {
    #[arg(long)]
    unitary: PathBuf,
    #[arg(long = "in")]
    input: String,
    #[arg(long = "out")]
    output: String,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    #[arg(long)]
    poly: PathBuf,
    #[arg(long = "emit-matrix")]
    emit_matrix: Option<PathBuf>,
    #[arg(long)]
    verify: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StatsMode {
    Moments,
    Promise,
    Subspaces,
    Masspoly,
    Histogram,
}

#[derive(Debug, Args)]
struct StatsArgs {
    #[arg(long, value_enum)]
    mode: StatsMode,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Sampled estimate with this many draws (exhaustive when omitted and small).
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 3)]
    degree: u32,
    /// CSV export of the sampled gap histogram.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AvgReduceArgs {
    #[arg(long)]
    poly: PathBuf,
    /// `exact` or `corrupt:RATE`.
    #[arg(long, default_value = "exact")]
    oracle: String,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Also search for and verify a constancy certificate.
    #[arg(long)]
    certificate: bool,
}

#[derive(Debug, Args)]
struct SbArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    gap: i64,
    /// Query count; defaults to `⌈10·2^{n/2}⌉`.
    #[arg(long)]
    l: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WeakenMode {
    Constant,
    Prefactor,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[arg(long)]
    model: String,
    #[arg(long)]
    constant: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_FLOPS)]
    flops: f64,
    #[arg(long = "horizon-years", default_value_t = 100.0)]
    horizon_years: f64,
    #[arg(long = "per-element")]
    per_element: bool,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Weaken the conjecture by this factor.
    #[arg(long)]
    weaken: Option<f64>,
    #[arg(long = "weaken-mode", value_enum, default_value_t = WeakenMode::Prefactor)]
    weaken_mode: WeakenMode,
}

#[derive(Debug, Args)]
struct ReproduceArgs {
    #[arg(long, default_value = "reproduction")]
    out: PathBuf,
    #[arg(long)]
    seed: u64,
    /// Conjecture constant for the multiplicative IQP and QAOA models.
    #[arg(long)]
    constant: Option<f64>,
    /// Smaller sample sizes; the report is marked as quick.
    #[arg(long)]
    quick: bool,
}

/// Resolved configuration of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: String,
    pub inputs: Vec<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub format: Format,
    pub limits: Limits,
}

/// Records produced by a subcommand, and whether it reported a failed check.
#[derive(Debug, Default)]
pub struct Output {
    pub records: Vec<Value>,
    pub human: Vec<String>,
    pub failed: bool,
}

impl Output {
    fn push(&mut self, command: &str, body: Value) {
        let mut m = Map::new();
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
        m.insert("command".into(), json!(command));
        if let Value::Object(b) = body {
            m.extend(b);
        }
        self.records.push(Value::Object(m));
    }

    fn text(&mut self, s: impl Into<String>) {
        self.human.push(s.into());
    }
}

/// Run `qcs` with `args` (including the program name) on stdout/stderr.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    dispatch_to(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn dispatch_to<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let format = cli.format;
    let name = subcommand_name(&cli.command);
    match run_cli(cli) {
        Ok(o) => {
            let res = emit(&o, format, out);
            if res.is_err() {
                return 1;
            }
            i32::from(o.failed)
        }
        Err(e) => {
            match format {
                Format::Json => {
                    let mut o = Output::default();
                    o.push(name, json!({ "error": { "kind": error_kind(&e), "message": e.to_string() } }));
                    let _ = emit(&o, format, out);
                }
                Format::Human => {
                    let _ = writeln!(err, "error: {e}");
                }
            }
            1
        }
    }
}

fn emit(o: &Output, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            for r in &o.records {
                writeln!(out, "{}", serde_json::to_string(r).expect("records serialise"))?;
            }
        }
        Format::Human => {
            if o.human.is_empty() {
                for r in &o.records {
                    writeln!(out, "{}", render_human(r))?;
                }
            } else {
                for h in &o.human {
                    writeln!(out, "{}", h.trim_end())?;
                }
            }
        }
    }
    Ok(())
}

fn render_human(r: &Value) -> String {
    let mut lines = Vec::new();
    if let Value::Object(m) = r {
        for (k, v) in m {
            if k == "schema_version" || k == "command" {
                continue;
            }
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            lines.push(format!("{k}: {shown}"));
        }
    }
    lines.join("\n")
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::BitLength { .. } => "bit-length",
        Error::IndexOutOfRange { .. } => "index-out-of-range",
        Error::CapExceeded { .. } => "cap-exceeded",
        Error::Parse { .. } => "parse",
        Error::ConstantTerm => "constant-term",
        Error::InvalidArgument(_) => "invalid-argument",
        Error::Dimension(_) => "dimension",
        Error::NotHermitian(_) => "not-hermitian",
        Error::Singular(_) => "singular",
        Error::ScaleTooLarge(_) => "scale-too-large",
        Error::PhotonMismatch { .. } => "photon-mismatch",
        Error::Oracle(_) => "oracle",
        Error::Io(_) => "io",
    }
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Gap(_) => "gap",
        Command::Count(_) => "count",
        Command::Simulate(_) => "simulate",
        Command::Iqp(_) => "iqp",
        Command::Qaoa(_) => "qaoa",
        Command::SgapClassify(_) => "sgap-classify",
        Command::HarnessA(_) => "harness-a",
        Command::Permanent(_) => "permanent",
        Command::BosonEncode(_) => "boson-encode",
        Command::FockAmp(_) => "fock-amp",
        Command::Reduce(_) => "reduce",
        Command::Stats(_) => "stats",
        Command::AvgReduce(_) => "avg-reduce",
        Command::SbAccept(_) => "sb-accept",
        Command::Estimate(_) => "estimate",
        Command::Reproduce(_) => "reproduce",
    }
}

fn parse_cap(limits: &mut Limits, spec: &str) -> Result<()> {
    let (name, value) = spec
        .split_once('=')
        .ok_or_else(|| Error::InvalidArgument(format!("cap {spec:?} is not NAME=VALUE")))?;
    let v: usize = value
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("cap value {value:?} is not an integer")))?;
    let h = Limits::HARD;
    let (slot, hard) = match name.trim() {
        "brute-force-vars" => (&mut limits.brute_force_vars, h.brute_force_vars),
        "eval-vars" => (&mut limits.eval_vars, h.eval_vars),
        "statevector-qubits" => (&mut limits.statevector_qubits, h.statevector_qubits),
        "distribution-qubits" => (&mut limits.distribution_qubits, h.distribution_qubits),
        "ryser-dim" => (&mut limits.ryser_dim, h.ryser_dim),
        "naive-dim" => (&mut limits.naive_dim, h.naive_dim),
        other => return Err(Error::InvalidArgument(format!("unknown cap {other:?}"))),
    };
    if v > hard {
        return Err(Error::InvalidArgument(format!("cap {name} = {v} exceeds the hard limit {hard}")));
    }
    *slot = v;
    Ok(())
}

fn run_config(cli: &Cli) -> Result<RunConfig> {
    let mut limits = Limits::current();
    for c in &cli.caps {
        parse_cap(&mut limits, c)?;
    }
    let threads = match cli.threads {
        Some(t) => Some(t),
        None => std::env::var("QCS_THREADS").ok().and_then(|s| s.parse().ok()),
    };
    if threads == Some(0) {
        return Err(Error::InvalidArgument("thread count must be positive".into()));
    }
    let (inputs, seed): (Vec<PathBuf>, Option<u64>) = match &cli.command {
        Command::Gap(a) => (vec![a.poly.clone()], None),
        Command::Count(a) => (a.poly.iter().cloned().collect(), None),
        Command::Simulate(a) => (vec![a.circuit.clone()], a.seed),
        Command::Iqp(a) => (vec![a.poly.clone()], None),
        Command::Qaoa(a) => (vec![a.poly.clone()], None),
        Command::SgapClassify(a) => (vec![a.poly.clone()], None),
        Command::HarnessA(a) => (vec![a.poly.clone()], a.seed),
        Command::Permanent(a) => (vec![a.matrix.clone()], None),
        Command::BosonEncode(a) => (vec![a.matrix.clone()], None),
        Command::FockAmp(a) => (vec![a.unitary.clone()], None),
        Command::Reduce(a) => (vec![a.poly.clone()], None),
        Command::Stats(a) => (Vec::new(), a.seed),
        Command::AvgReduce(a) => (vec![a.poly.clone()], Some(a.seed)),
        Command::SbAccept(_) | Command::Estimate(_) => (Vec::new(), None),
        Command::Reproduce(a) => (Vec::new(), Some(a.seed)),
    };
    Ok(RunConfig {
        subcommand: subcommand_name(&cli.command).to_string(),
        inputs,
        seed,
        threads,
        format: cli.format,
        limits,
    })
}

fn run_cli(cli: Cli) -> Result<Output> {
    let cfg = run_config(&cli)?;
    let previous = Limits::current();
    Limits::install(cfg.limits);
    let result = match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(|| run_command(&cli.command, &cfg)),
        None => run_command(&cli.command, &cfg),
    };
    Limits::install(previous);
    result
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// A polynomial from canonical JSON, or from the text grammar with `n` taken
/// as the largest variable index.
pub fn parse_poly_source(s: &str) -> Result<Poly3> {
    let t = s.trim();
    if t.starts_with('{') {
        return Poly3::from_json(t);
    }
    let mut n = 0usize;
    let bytes = t.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' {
            let start = i + 1;
            let mut j = start;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if let Ok(v) = t[start..j].parse::<usize>() {
                n = n.max(v);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    Poly3::parse(t, n)
}

fn load_poly(path: &Path) -> Result<Poly3> {
    parse_poly_source(&read_file(path)?)
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn require_seed(seed: Option<u64>, what: &str) -> Result<u64> {
    seed.ok_or_else(|| Error::InvalidArgument(format!("{what} is randomized and needs --seed")))
}

fn label_name(l: SgapLabel) -> &'static str {
    match l {
        SgapLabel::Yes => "yes",
        SgapLabel::No => "no",
        SgapLabel::NonPromise => "non-promise",
    }
}

fn run_command(cmd: &Command, cfg: &RunConfig) -> Result<Output> {
    let mut o = Output::default();
    let name = cfg.subcommand.as_str();
    match cmd {
        Command::Gap(a) => {
            let f = load_poly(&a.poly)?;
            let gap = match a.method {
                GapMethod::Brute => f.gap_bruteforce()?,
                GapMethod::Pointwise => f.gap_pointwise()?,
            };
            let zeros = f.zeros_count()?;
            o.push(
                name,
                json!({
                    "n": f.n(),
                    "poly": f.to_string(),
                    "method": format!("{:?}", a.method).to_lowercase(),
                    "gap": gap.0,
                    "zeros": zeros,
                    "ones": (1u64 << f.n()) - zeros,
                }),
            );
            o.text(format!("gap = {}  (n = {}, zeros = {zeros})", gap.0, f.n()));
        }
        Command::Count(a) => {
            if let Some(n) = a.bound_n {
                let b = monomial_bound_check(n, a.delta)?;
                o.push(
                    name,
                    json!({
                        "mode": "monomial-bound",
                        "n": n,
                        "delta": a.delta,
                        "a": b.a,
                        "b": b.b,
                        "monomials": b.m_value.to_string(),
                        "log2_monomials": b.log2_m,
                        "log2_threshold": b.log2_threshold,
                        "holds": b.holds,
                    }),
                );
            } else {
                let f = load_poly(a.poly.as_deref().expect("clap enforces --poly"))?;
                let start = Instant::now();
                let mut body = match a.method {
                    CountMethod::Brute => json!({ "count": f.ones_count()? }),
                    CountMethod::Lptwy => {
                        let r = count_ones_lptwy_report(&f, a.free_vars)?;
                        json!({
                            "count": r.ones,
                            "free_vars": a.free_vars,
                            "l": r.l,
                            "fixed_vars": r.fixed_vars,
                            "monomials": r.monomials,
                            "degree": r.degree,
                        })
                    }
                };
                let elapsed = start.elapsed().as_secs_f64() * 1e3;
                let count = body["count"].as_u64().unwrap_or(0);
                let total = 1u64 << f.n();
                let m = body.as_object_mut().expect("object");
                m.insert("method".into(), json!(format!("{:?}", a.method).to_lowercase()));
                m.insert("n".into(), json!(f.n()));
                m.insert("gap".into(), json!(total as i64 - 2 * count as i64));
                m.insert("timing".into(), json!({ "elapsed_ms": elapsed }));
                o.push(name, body);
            }
        }
        Command::Simulate(a) => {
            let c = Circuit::from_json(&read_file(&a.circuit)?)?;
            let state = c.run()?;
            if let Some(idx) = a.amplitude {
                let z = state.amplitude(idx)?;
                o.push(
                    name,
                    json!({ "qubits": c.qubits, "index": idx, "amplitude": complex_json(z), "probability": z.norm_sqr() }),
                );
            } else if a.distribution {
                o.push(name, json!({ "qubits": c.qubits, "distribution": state.full_distribution()? }));
            } else {
                let k = a.samples.expect("clap enforces one mode");
                let seed = require_seed(a.seed, "sampling")?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                o.push(
                    name,
                    json!({ "qubits": c.qubits, "seed": seed, "samples": state.sample_many(k, &mut rng)? }),
                );
            }
        }
        Command::Iqp(a) => {
            let f = load_poly(&a.poly)?;
            let n = f.n();
            let scale = (n as f64).exp2();
            if a.amplitude {
                let z = iqp_gap_amplitude(&f)?;
                o.push(
                    name,
                    json!({ "n": n, "amplitude": complex_json(z), "scaled": scale * z.re, "gap": f.gap_bruteforce()?.0 }),
                );
            } else if a.shifted {
                let z = iqp_shifted_amplitude(&f)?;
                o.push(
                    name,
                    json!({
                        "n": n,
                        "delta": f.linear_mask(),
                        "amplitude": complex_json(z),
                        "scaled": scale * z.re,
                        "gap": f.gap_bruteforce()?.0,
                    }),
                );
            } else {
                o.push(name, json!({ "n": n, "distribution": build_iqp(&f).run()?.full_distribution()? }));
            }
            if let Some(p) = &a.emit_circuit {
                write_file(p, &build_iqp(&f).to_json())?;
            }
        }
        Command::Qaoa(a) => {
            let f = load_poly(&a.poly)?;
            let (spec, circuit) = build_qaoa(&f);
            let n = f.n();
            let mut body = json!({
                "n": n,
                "qubits": spec.qubits,
                "constraints": spec.constraint_count(),
                "constraint_bound": qaoa_constraint_bound(n as u64),
                "gamma": spec.gamma,
                "beta": spec.beta,
            });
            let m = body.as_object_mut().expect("object");
            if a.acceptance {
                let acc = qaoa_acceptance(&f)?;
                let gap = f.gap_bruteforce()?.0;
                m.insert("acceptance".into(), json!(acc));
                m.insert("gap".into(), json!(gap));
                m.insert("kappa".into(), json!(qaoa_kappa(n)));
                let ratio = if gap == 0 { Value::Null } else { json!(acc / (gap * gap) as f64) };
                m.insert("ratio".into(), ratio);
            }
            if a.gadget {
                let cols: Vec<Value> = [false, true]
                    .iter()
                    .map(|&b| teleport_gadget_column(b).map(|c| json!([complex_json(c[0]), complex_json(c[1])])))
                    .collect::<Result<_>>()?;
                m.insert("gadget_columns".into(), json!(cols));
            }
            o.push(name, body);
            if let Some(p) = &a.emit_circuit {
                write_file(p, &circuit.to_json())?;
            }
        }
        Command::SgapClassify(a) => {
            let f = load_poly(&a.poly)?;
            let label = sgap_classify(&f)?;
            let th = SgapThresholds::new(f.n());
            o.push(
                name,
                json!({ "n": f.n(), "gap": f.gap_bruteforce()?.0, "label": label_name(label), "thresholds": th }),
            );
        }
        Command::HarnessA(a) => harness(a, &mut o, name)?,
        Command::Permanent(a) => {
            let src = read_file(&a.matrix)?;
            if let Ok(m) = IntMatrix::from_json(&src) {
                let p = match a.method {
                    PermMethod::Naive => permanent_naive_int(&m)?,
                    PermMethod::Ryser => permanent_ryser_int(&m)?,
                    PermMethod::Sparse => permanent_sparse_int(&m, SPARSE_STATE_CAP)?,
                };
                o.push(
                    name,
                    json!({ "dim": m.dim(), "integer": true, "method": format!("{:?}", a.method).to_lowercase(), "permanent": p.to_string() }),
                );
                o.text(format!("Per = {p}"));
            } else {
                let m = ComplexMatrix::from_json(&src)?;
                let p = match a.method {
                    PermMethod::Naive => permanent_naive(&m)?,
                    PermMethod::Ryser => permanent_ryser(&m)?,
                    PermMethod::Sparse => {
                        return Err(Error::InvalidArgument("the sparse method needs an integer matrix".into()))
                    }
                };
                o.push(
                    name,
                    json!({ "dim": m.dim()?, "integer": false, "method": format!("{:?}", a.method).to_lowercase(), "permanent": complex_json(p) }),
                );
                o.text(format!("Per = {} {:+}i", p.re, p.im));
            }
        }
        Command::BosonEncode(a) => {
            let m = ComplexMatrix::from_json(&read_file(&a.matrix)?)?;
            let c = match a.c {
                Some(c) => c,
                None => default_scale(&m)?,
            };
            let e = encode_permanent_with(&m, c)?;
            let d = m.dim()?;
            let mut body = json!({
                "dim": d,
                "spectral_norm": spectral_norm(&m)?,
                "c": e.c,
                "amplitude": complex_json(e.amplitude),
                "scaled_permanent": complex_json(e.scaled_permanent),
                "relative_error": e.relative_error(),
                "unitarity_defect": e.unitary.unitarity_defect()?,
                "block_defect": e.unitary.block(0, 0, d, d).max_abs_diff(&m.scale_re(c))?,
            });
            if a.spectrum {
                let eig = herm_eig(&m.adjoint().mul(&m)?)?;
                body.as_object_mut().expect("object").insert("gram_eigenvalues".into(), json!(eig.values));
            }
            o.push(name, body);
            if let Some(p) = &a.emit_unitary {
                write_file(p, &e.unitary.to_json())?;
            }
        }
        Command::FockAmp(a) => {
            let u = ComplexMatrix::from_json(&read_file(&a.unitary)?)?;
            let r: FockConfig = a.input.parse()?;
            let r2: FockConfig = a.output.parse()?;
            let z = fock_amplitude(&u, &r, &r2)?;
            o.push(
                name,
                json!({
                    "in": r.0,
                    "out": r2.0,
                    "photons": r.photons(),
                    "amplitude": complex_json(z),
                    "probability": z.norm_sqr(),
                    "unitarity_defect": u.unitarity_defect()?,
                }),
            );
        }
        Command::Reduce(a) => {
            let f = load_poly(&a.poly)?;
            let g = build_graph(&f)?;
            let mut body = json!({
                "n": f.n(),
                "nodes": g.nodes,
                "terms": g.terms,
                "used_variables": g.used_variables(),
                "nonzeros": g.adjacency.nonzeros(),
            });
            if let Some(p) = &a.emit_matrix {
                write_file(p, &g.adjacency.to_json())?;
            }
            if a.verify {
                let r = verify_reduction(&f)?;
                let m = body.as_object_mut().expect("object");
                m.insert("perm".into(), json!(r.perm.to_string()));
                m.insert("expected".into(), json!(r.expected.to_string()));
                m.insert("gap".into(), json!(r.gap));
                m.insert("unused_variables".into(), json!(r.unused_variables));
                m.insert("method".into(), json!(r.method));
                m.insert("ok".into(), json!(r.ok));
                o.failed = !r.ok;
            }
            o.push(name, body);
        }
        Command::Stats(a) => stats(a, &mut o, name)?,
        Command::AvgReduce(a) => avg_reduce(a, &mut o, name)?,
        Command::SbAccept(a) => {
            let r = sb_report(a.n, a.gap)?;
            let mut body = serde_json::to_value(r)?;
            if let Some(l) = a.l {
                body.as_object_mut()
                    .expect("object")
                    .insert("log_accept_at_l".into(), json!({ "l": l, "log_accept": sb_acceptance_exact(a.gap, a.n, l)? }));
            }
            o.push(name, body);
        }
        Command::Estimate(a) => estimate_cmd(a, &mut o, name)?,
        Command::Reproduce(a) => {
            let rc = reproduce::ReproduceConfig {
                seed: a.seed,
                constant: a.constant,
                quick: a.quick,
            };
            let report = reproduce::reproduce_all(&a.out, &rc)?;
            for r in &report.records {
                o.push(name, r.clone());
            }
            o.text(report.summary());
            o.failed = !report.all_passed();
        }
    }
    Ok(o)
}

fn harness(a: &HarnessArgs, o: &mut Output, name: &str) -> Result<()> {
    let f = load_poly(&a.poly)?;
    let n = f.n();
    let label = sgap_classify(&f)?;
    let verdict = algorithm_a(&f, &mut ExactProvider)?;
    let correct = match label {
        SgapLabel::Yes => Some(verdict.accepted()),
        SgapLabel::No => Some(!verdict.accepted()),
        SgapLabel::NonPromise => None,
    };
    let mut body = json!({
        "n": n,
        "label": label_name(label),
        "verdict": verdict,
        "correct": correct,
    });
    if a.epsilon > 0.0 {
        let m = body.as_object_mut().expect("object");
        m.insert("epsilon".into(), json!(a.epsilon));
        match a.adversary {
            Adversary::Greedy => {
                let r = adversarial_robustness(&f, a.epsilon)?;
                m.insert("adversary".into(), json!("greedy"));
                m.insert("robustness".into(), serde_json::to_value(r)?);
            }
            Adversary::Random => {
                let seed = require_seed(a.seed, "the random adversary")?;
                let fbar = f.strip_linear();
                let exact = build_iqp(&fbar).run()?.full_distribution()?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let w: Vec<f64> = exact.iter().map(|_| rng.gen::<f64>()).collect();
                let s: f64 = w.iter().sum();
                let mix = a.epsilon / 2.0;
                let table: Vec<f64> = exact.iter().zip(&w).map(|(q, r)| (1.0 - mix) * q + mix * r / s).collect();
                let err = distribution_error(&table, &exact)?;
                let mut provider = TableProvider {
                    fbar: fbar.clone(),
                    table,
                };
                let (mut promise, mut right) = (0usize, 0usize);
                for d in 0..1u64 << n {
                    let g = fbar.with_linear_mask(d)?;
                    let lab = sgap_label_from_gap(g.gap_bruteforce()?.0, n);
                    if lab == SgapLabel::NonPromise {
                        continue;
                    }
                    promise += 1;
                    let v = algorithm_a(&g, &mut provider)?;
                    if v.accepted() == (lab == SgapLabel::Yes) {
                        right += 1;
                    }
                }
                m.insert("adversary".into(), json!("random"));
                m.insert("seed".into(), json!(seed));
                m.insert("distribution_error".into(), serde_json::to_value(err)?);
                m.insert("robustness".into(), json!({ "promise_instances": promise, "correct": right }));
            }
        }
    }
    o.push(name, body);
    Ok(())
}

fn stats(a: &StatsArgs, o: &mut Output, name: &str) -> Result<()> {
    match a.mode {
        StatsMode::Moments => {
            let report = match a.samples {
                None => exact_moment(a.n, a.k)?,
                Some(s) => sampled_moment(a.n, a.k, s, require_seed(a.seed, "sampled moments")?)?,
            };
            let mut body = json!({ "mode": "moments", "report": report });
            if a.samples.is_none() {
                if let Ok(c) = count_matrix_solutions(a.n, a.k) {
                    body.as_object_mut().expect("object").insert("matrix_solutions".into(), json!(c));
                }
            }
            o.push(name, body);
        }
        StatsMode::Promise => {
            let seed = if a.n <= 4 { a.seed.unwrap_or(0) } else { require_seed(a.seed, "sampled promise statistics")? };
            let r = promise_stats(a.n, a.samples.unwrap_or(10_000), seed)?;
            o.push(name, json!({ "mode": "promise", "report": r }));
        }
        StatsMode::Subspaces => {
            let counts: Vec<u64> = (1..=a.k.max(1))
                .map(|k| count_condition_subspaces(k, a.degree))
                .collect::<Result<_>>()?;
            o.push(name, json!({ "mode": "subspaces", "degree": a.degree, "counts": counts }));
        }
        StatsMode::Masspoly => {
            let p = mass_poly();
            let sum: f64 = p.c.iter().sum();
            let (excess, at) = mass_poly_grid_excess(&p, 20.0, 1e-3);
            o.push(
                name,
                json!({
                    "mode": "masspoly",
                    "degree": p.degree,
                    "delta": p.delta,
                    "c": p.c,
                    "sum": sum,
                    "gaussian_mass": p.gaussian_mass,
                    "max_excess": excess,
                    "max_excess_at": at,
                }),
            );
        }
        StatsMode::Histogram => {
            let seed = require_seed(a.seed, "the gap histogram")?;
            let samples = a.samples.unwrap_or(10_000);
            let h = gap_histogram(a.n, samples, seed)?;
            if let Some(p) = &a.csv {
                let mut csv = String::from("gap,count\n");
                for (g, c) in &h {
                    csv += &format!("{g},{c}\n");
                }
                write_file(p, &csv)?;
            }
            let rows: Vec<Value> = h.iter().map(|(g, c)| json!([g, c])).collect();
            o.push(name, json!({ "mode": "histogram", "n": a.n, "samples": samples, "seed": seed, "histogram": rows }));
        }
    }
    Ok(())
}

fn avg_reduce(a: &AvgReduceArgs, o: &mut Output, name: &str) -> Result<()> {
    let f = load_poly(&a.poly)?;
    let truth = f.gap_bruteforce()?.0;
    let mut oracle = match a.oracle.as_str() {
        "exact" => GapOracle::Exact,
        s => match s.strip_prefix("corrupt:") {
            Some(rate) => {
                let r: f64 = rate
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad corruption rate {rate:?}")))?;
                GapOracle::corrupted(r, a.seed ^ 0x9e37_79b9_7f4a_7c15)?
            }
            None => return Err(Error::InvalidArgument(format!("unknown oracle {s:?}"))),
        },
    };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut traces = Vec::with_capacity(a.trials);
    let mut successes = 0usize;
    for _ in 0..a.trials {
        let t = gap_from_quasi_avg_oracle(&f, &mut oracle, &mut rng)?;
        successes += usize::from(t.gap == truth);
        traces.push(t);
    }
    let mut body = json!({
        "n": f.n(),
        "oracle": a.oracle,
        "seed": a.seed,
        "trials": a.trials,
        "true_gap": truth,
        "successes": successes,
        "traces": traces,
    });
    if a.certificate {
        let cert = find_certificate(&f)?;
        let verified = match &cert {
            Some(s) => certificate_verify(|x| f.eval_mask(x), f.n(), s)?,
            None => false,
        };
        let accepting = if f.n() <= 4 { Some(count_accepting_certificates(&f)?) } else { None };
        let m = body.as_object_mut().expect("object");
        m.insert("certificate".into(), json!(cert));
        m.insert("certificate_verified".into(), json!(verified));
        m.insert("accepting_certificates".into(), json!(accepting));
    }
    o.push(name, body);
    Ok(())
}

fn estimate_cmd(a: &EstimateArgs, o: &mut Output, name: &str) -> Result<()> {
    let model: Model = a.model.parse()?;
    let mut p = EstimateParams::new(model);
    p.flops = a.flops;
    p.horizon_seconds = a.horizon_years / 100.0 * CENTURY_SECONDS;
    p.budget = a.budget;
    if let Some(c) = a.constant {
        p.constant = c;
    }
    if a.per_element {
        p = p.per_element();
    }
    let e = estimate(&p)?;
    let rows = headline_table(p.flops, p.horizon_seconds, p.budget, a.constant)?;
    let mut body = json!({ "estimate": e, "table": rows });
    let mut human = format!(
        "{}: {} {}, {} {}\n\n{}",
        model,
        e.q,
        model.unit(),
        crate::estimator::with_commas(e.elements),
        model.element_name(),
        format_table(&rows)
    );
    if let Some(d) = a.weaken {
        let mode = match a.weaken_mode {
            WeakenMode::Constant => Weakening::DivideConstant,
            WeakenMode::Prefactor => Weakening::DividePrefactor,
        };
        let w = conjecture_weakening(&p, d, mode)?;
        human += &format!("\nweakened by {d}: {} {} (+{})\n", w.after.q, model.unit(), w.extra);
        body.as_object_mut().expect("object").insert("weakening".into(), serde_json::to_value(w)?);
    }
    o.push(name, body);
    o.text(human);
    Ok(())
}
