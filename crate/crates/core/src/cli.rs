//! The `zncomplete` command line: argument parsing, dispatch, and the JSON
//! and CSV output formats.
//!
//! Every command prints one [`RunReport`] as JSON unless `--csv` is given.
//! Exit codes: 0 on success, 1 when the requested object could not be
//! produced (e.g. a witness for an unreachable target), 2 on usage errors.

use std::ffi::OsString;
use std::path::Path;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ap::{ap_meets_target, longest_ap, APSearchConfig};
use crate::constructive::{olson_decompose, DecomposeConfig};
use crate::error::Error;
use crate::experiments::{
    corollary_experiment, diderrich_probe, divisor_family, exact_threshold, pipeline_experiment,
    sampled_threshold, small_sum_family, ExactConfig, ExperimentConfig, PipelineConfig,
    Restriction, SizeRule, DEFAULT_BUDGET,
};
use crate::residue::{CyclicSet, IntegerSumSet, Modulus, ResidueSet};
use crate::sumset::{
    cyclic_subset_sums, find_witness, integer_subset_sums, is_complete, restricted_sumset_cyclic,
    restricted_sumset_integers, SumsetOptions,
};

pub const SCHEMA: &str = include_str!("../schema/run-report.v1.json");
pub const SCHEMA_ID: &str = "zn-complete/run-report/v1";

#[derive(Debug, Parser)]
#[command(name = "zncomplete", version, about = "Subset sums and completeness in Z_n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Subset sums S_A (mod n or over the integers) or the restricted sumset l*A
    Sumset(SumsetArgs),
    /// Whether S_A covers Z_n, with the missing residues
    Complete(CompleteArgs),
    /// A sub-collection of A summing to the target mod n
    Witness(WitnessArgs),
    /// Witness through the split/AP/coverage pipeline for coprime sets
    Decompose(DecomposeArgs),
    /// Longest arithmetic progression in S_A or l*A over the integers
    Ap(ApArgs),
    /// Completeness threshold by exhaustive search or sampling
    Threshold(ThresholdArgs),
    /// Extremal incomplete sets
    Extremal(ExtremalArgs),
    /// Seeded experiments producing tables
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Sumset(_) => "sumset",
            Command::Complete(_) => "complete",
            Command::Witness(_) => "witness",
            Command::Decompose(_) => "decompose",
            Command::Ap(_) => "ap",
            Command::Threshold(_) => "threshold",
            Command::Extremal(_) => "extremal",
            Command::Experiment(_) => "experiment",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SumsetArgs {
    /// Work in Z_n; omit for integer subset sums
    #[arg(long)]
    pub modulus: Option<u64>,
    /// Comma-separated integers, or @file with one integer per line
    #[arg(long, allow_hyphen_values = true)]
    pub set: String,
    /// Sums of exactly this many distinct elements
    #[arg(long)]
    pub exact_l: Option<usize>,
    /// Leave out the empty sum (modular S_A only)
    #[arg(long)]
    pub nonempty: bool,
    /// Print maximal runs [start, end] instead of every member
    #[arg(long)]
    pub rle: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CompleteArgs {
    #[arg(long)]
    pub modulus: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub set: String,
    /// Require every element to be coprime to n
    #[arg(long)]
    pub coprime: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct WitnessArgs {
    #[arg(long)]
    pub modulus: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub set: String,
    #[arg(long, allow_hyphen_values = true)]
    pub target: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Fallback {
    Dp,
}

#[derive(Debug, Args, Serialize)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub modulus: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub set: String,
    #[arg(long, allow_hyphen_values = true)]
    pub target: i64,
    /// Size of the first part; default ⌈2√n⌉
    #[arg(long)]
    pub split: Option<usize>,
    /// Do not double the split when the progression is too short
    #[arg(long)]
    pub no_retry: bool,
    #[arg(long)]
    pub max_difference: Option<u64>,
    /// Fall back to the DP witness when the pipeline fails
    #[arg(long, value_enum)]
    pub fallback: Option<Fallback>,
}

#[derive(Debug, Args, Serialize)]
pub struct ApArgs {
    /// Positive integers
    #[arg(long)]
    pub set: String,
    /// Search l*A instead of S_A
    #[arg(long)]
    pub exact_l: Option<usize>,
    /// Progression length of interest; bounds the searched differences
    #[arg(long)]
    pub target_length: Option<u64>,
    #[arg(long)]
    pub max_difference: Option<u64>,
    /// With --exact-l: check for an AP of length ≥ ratio·l·|A|
    #[arg(long)]
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RestrictionArg {
    Nonzero,
    Coprime,
}

impl From<RestrictionArg> for Restriction {
    fn from(r: RestrictionArg) -> Self {
        match r {
            RestrictionArg::Nonzero => Restriction::Nonzero,
            RestrictionArg::Coprime => Restriction::Coprime,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub modulus: u64,
    #[arg(long, value_enum, default_value = "nonzero")]
    pub restriction: RestrictionArg,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: ModeArg,
    /// Sampled sizes: all, m=<k>, c=<ratio> (⌈c√n⌉) or olson (⌊2√n⌋+1)
    #[arg(long, default_value = "all")]
    pub sizes: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, env = "ZNC_SEED")]
    pub seed: Option<u64>,
    #[arg(long, env = "ZNC_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, env = "ZNC_JOBS")]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    SmallSum,
    Divisor,
}

#[derive(Debug, Args, Serialize)]
pub struct ExtremalArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub modulus: u64,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "experiment", rename_all = "lowercase")]
pub enum ExperimentCommand {
    /// Success rate of finding an AP of length n in S_A for random A ⊆ [n]
    Corollary(CorollaryArgs),
    /// Decomposition pipeline over random composite moduli and targets
    Pipeline(PipelineArgs),
    /// Exact nonzero threshold next to p + n/p − 2
    Diderrich(DiderrichArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CorollaryArgs {
    #[arg(long)]
    pub modulus: u64,
    /// Comma-separated ratios c; |A| = ⌈c√n⌉
    #[arg(long, value_delimiter = ',', required = true)]
    pub c: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, env = "ZNC_SEED")]
    pub seed: u64,
    #[arg(long, env = "ZNC_JOBS")]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct PipelineArgs {
    #[arg(long, env = "ZNC_SEED")]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub cases: usize,
    #[arg(long, default_value_t = 200)]
    pub n_min: u64,
    #[arg(long, default_value_t = 5000)]
    pub n_max: u64,
    #[arg(long, default_value_t = 8.0)]
    pub size_factor: f64,
    #[arg(long, default_value_t = 20)]
    pub targets: usize,
    #[arg(long, env = "ZNC_JOBS")]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct DiderrichArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub moduli: Vec<u64>,
    #[arg(long, env = "ZNC_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub csv: bool,
}

/// The JSON object printed by every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub command: String,
    pub inputs: Value,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub engine_version: String,
    pub wall_time_ms: f64,
}

/// What a finished command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Payload {
    Json {
        result: Value,
        failure: Option<String>,
        seed: Option<u64>,
    },
    Csv(String),
}

impl Payload {
    fn ok(result: impl Serialize) -> Result<Self, Error> {
        Ok(Payload::Json {
            result: to_value(result)?,
            failure: None,
            seed: None,
        })
    }
}

fn to_value(v: impl Serialize) -> Result<Value, Error> {
    serde_json::to_value(v).map_err(|e| Error::InvalidInput(e.to_string()))
}

/// Short machine-readable reason for a failed check, `None` for usage errors.
fn failure_reason(e: &Error) -> Option<&'static str> {
    match e {
        Error::Unreachable { .. } => Some("unreachable"),
        Error::ApNotFound { .. } => Some("ap-not-found"),
        Error::SplitTooSmall { .. } => Some("split-too-small"),
        Error::BudgetExceeded { .. } => Some("budget-exceeded"),
        _ => None,
    }
}

/// Parses `--set`: inline `1,2,3` (empty string for ∅) or `@path` with one
/// integer per line and `#` comments.
pub fn parse_set(spec: &str) -> Result<Vec<i64>, Error> {
    let parse = |tok: &str| {
        tok.parse::<i64>()
            .map_err(|_| Error::InvalidInput(format!("not an integer: {tok:?}")))
    };
    if let Some(path) = spec.strip_prefix('@') {
        let text = std::fs::read_to_string(Path::new(path))
            .map_err(|e| Error::InvalidInput(format!("{path}: {e}")))?;
        text.lines()
            .map(|line| line.split('#').next().unwrap_or("").trim())
            .filter(|line| !line.is_empty())
            .map(parse)
            .collect()
    } else {
        spec.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(parse)
            .collect()
    }
}

fn positive_integers(spec: &str) -> Result<Vec<u64>, Error> {
    parse_set(spec)?
        .into_iter()
        .map(|x| {
            u64::try_from(x)
                .ok()
                .filter(|&x| x >= 1)
                .ok_or_else(|| Error::InvalidInput(format!("{x} is not a positive integer")))
        })
        .collect()
}

fn cyclic_set(modulus: Modulus, spec: &str, coprime: bool) -> Result<CyclicSet, Error> {
    let values = parse_set(spec)?;
    let reduced: Vec<u64> = values.iter().map(|&v| modulus.reduce_signed(v)).collect();
    if coprime {
        CyclicSet::coprime(modulus, reduced)
    } else {
        CyclicSet::new(modulus, reduced)
    }
}

fn runs(members: impl Iterator<Item = u64>) -> Vec<[u64; 2]> {
    let mut out: Vec<[u64; 2]> = Vec::new();
    for x in members {
        match out.last_mut() {
            Some(run) if run[1] + 1 == x => run[1] = x,
            _ => out.push([x, x]),
        }
    }
    out
}

fn residue_payload(set: &ResidueSet, rle: bool) -> Value {
    let mut v = json!({
        "kind": "residues",
        "modulus": set.modulus().get(),
        "size": set.len(),
    });
    if rle {
        v["runs"] = json!(runs(set.members()));
    } else {
        v["members"] = json!(set.to_vec());
    }
    v
}

fn integer_payload(set: &IntegerSumSet, rle: bool) -> Value {
    let mut v = json!({
        "kind": "integers",
        "bound": set.bound(),
        "size": set.len(),
    });
    if rle {
        v["runs"] = json!(runs(set.members()));
    } else {
        v["members"] = json!(set.to_vec());
    }
    v
}

fn cmd_sumset(a: &SumsetArgs) -> Result<Payload, Error> {
    let result = match a.modulus {
        Some(n) => {
            let set = cyclic_set(Modulus::new(n)?, &a.set, false)?;
            let sums = match a.exact_l {
                Some(l) => restricted_sumset_cyclic(&set, l)?,
                None => cyclic_subset_sums(&set, SumsetOptions { include_empty: !a.nonempty }),
            };
            residue_payload(&sums, a.rle)
        }
        None => {
            if a.nonempty {
                return Err(Error::InvalidInput("--nonempty needs --modulus".into()));
            }
            let values = positive_integers(&a.set)?;
            let sums = match a.exact_l {
                Some(l) => restricted_sumset_integers(&values, l)?,
                None => integer_subset_sums(&values),
            };
            integer_payload(&sums, a.rle)
        }
    };
    Payload::ok(result)
}

fn cmd_complete(a: &CompleteArgs) -> Result<Payload, Error> {
    let set = cyclic_set(Modulus::new(a.modulus)?, &a.set, a.coprime)?;
    Payload::ok(is_complete(&set))
}

fn cmd_witness(a: &WitnessArgs) -> Result<Payload, Error> {
    let modulus = Modulus::new(a.modulus)?;
    let set = cyclic_set(modulus, &a.set, false)?;
    Payload::ok(find_witness(&set, modulus.reduce_signed(a.target))?)
}

fn cmd_decompose(a: &DecomposeArgs) -> Result<Payload, Error> {
    let modulus = Modulus::new(a.modulus)?;
    let set = cyclic_set(modulus, &a.set, true)?;
    let target = modulus.reduce_signed(a.target);
    let cfg = DecomposeConfig {
        split: a.split,
        retry: !a.no_retry,
        max_difference: a.max_difference,
    };
    match olson_decompose(&set, target, &cfg) {
        Ok(out) => Payload::ok(json!({
            "path": "pipeline",
            "witness": out.witness,
            "trace": out.trace,
        })),
        Err(e) if failure_reason(&e).is_some() => {
            let pipeline_error = e.to_string();
            if a.fallback == Some(Fallback::Dp) {
                match find_witness(&set, target) {
                    Ok(w) => Payload::ok(json!({
                        "path": "dp",
                        "witness": w,
                        "pipeline_error": pipeline_error,
                    })),
                    Err(dp) => Ok(Payload::Json {
                        result: json!({ "path": "none", "pipeline_error": pipeline_error }),
                        failure: Some(format!("{}: {dp}", failure_reason(&dp).unwrap_or("error"))),
                        seed: None,
                    }),
                }
            } else {
                Ok(Payload::Json {
                    result: json!({ "path": "none", "pipeline_error": pipeline_error }),
                    failure: Some(format!("{}: {e}", failure_reason(&e).unwrap_or("error"))),
                    seed: None,
                })
            }
        }
        Err(e) => Err(e),
    }
}

fn cmd_ap(a: &ApArgs) -> Result<Payload, Error> {
    let values = positive_integers(&a.set)?;
    if let (Some(l), Some(c)) = (a.exact_l, a.ratio) {
        let verdict = ap_meets_target(&values, l, c)?;
        let host_size = restricted_sumset_integers(&values, l)?.len();
        return Payload::ok(json!({
            "host_size": host_size,
            "report": verdict.report,
            "verdict": { "meets": verdict.meets, "required": verdict.required },
        }));
    }
    if a.ratio.is_some() {
        return Err(Error::InvalidInput("--ratio needs --exact-l".into()));
    }
    let host = match a.exact_l {
        Some(l) => restricted_sumset_integers(&values, l)?,
        None => integer_subset_sums(&values),
    };
    let cfg = APSearchConfig {
        target_length: a.target_length.unwrap_or(2),
        max_difference: a.max_difference,
    };
    let report = longest_ap(&host, &cfg)?;
    Payload::ok(json!({ "host_size": host.len(), "report": report }))
}

#[derive(Serialize)]
struct ThresholdRow {
    n: u64,
    restriction: Restriction,
    mode: crate::experiments::SearchMode,
    size: usize,
    checked: u64,
    complete: u64,
    incomplete: u64,
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::InvalidInput(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidInput(e.to_string()))
}

fn cmd_threshold(a: &ThresholdArgs) -> Result<Payload, Error> {
    let modulus = Modulus::new(a.modulus)?;
    let restriction = Restriction::from(a.restriction);
    let record = match a.mode {
        ModeArg::Exhaustive => exact_threshold(modulus, restriction, ExactConfig::with_budget(a.budget)),
        ModeArg::Sampled => {
            let seed = a
                .seed
                .ok_or_else(|| Error::InvalidInput("--seed is required in sampled mode".into()))?;
            let mut cfg = ExperimentConfig::new(seed, a.trials, a.sizes.parse::<SizeRule>()?);
            cfg.jobs = a.jobs;
            sampled_threshold(modulus, restriction, &cfg)
        }
    };
    let record = match record {
        Ok(r) => r,
        Err(e @ Error::BudgetExceeded { .. }) => {
            return Ok(Payload::Json {
                result: json!({ "n": a.modulus }),
                failure: Some(format!("budget-exceeded: {e}; try --mode sampled")),
                seed: None,
            })
        }
        Err(e) => return Err(e),
    };
    if a.csv {
        let rows: Vec<ThresholdRow> = record
            .sizes
            .iter()
            .map(|t| ThresholdRow {
                n: record.n,
                restriction: record.restriction,
                mode: record.mode,
                size: t.size,
                checked: t.checked,
                complete: t.complete,
                incomplete: t.incomplete,
            })
            .collect();
        return Ok(Payload::Csv(to_csv(&rows)?));
    }
    let seed = record.seed;
    Ok(Payload::Json {
        result: to_value(&record)?,
        failure: None,
        seed,
    })
}

fn cmd_extremal(a: &ExtremalArgs) -> Result<Payload, Error> {
    let modulus = Modulus::new(a.modulus)?;
    let family = match a.family {
        FamilyArg::SmallSum => small_sum_family(modulus),
        FamilyArg::Divisor => divisor_family(modulus)?,
    };
    Payload::ok(family)
}

#[derive(Serialize)]
struct DiderrichRow {
    n: u64,
    smallest_prime: u64,
    reference: u64,
    m_star: Option<usize>,
    max_incomplete_size: usize,
    threshold_equals_reference: bool,
    max_incomplete_equals_reference: bool,
}

fn cmd_experiment(e: &ExperimentCommand) -> Result<Payload, Error> {
    match e {
        ExperimentCommand::Corollary(a) => {
            let mut cfg = ExperimentConfig::new(a.seed, a.trials, SizeRule::All);
            cfg.jobs = a.jobs;
            let rows = corollary_experiment(a.modulus, &a.c, &cfg)?;
            if a.csv {
                return Ok(Payload::Csv(to_csv(&rows)?));
            }
            Ok(Payload::Json {
                result: json!({ "kind": "corollary", "rows": rows }),
                failure: None,
                seed: Some(a.seed),
            })
        }
        ExperimentCommand::Pipeline(a) => {
            let cfg = PipelineConfig {
                seed: a.seed,
                cases: a.cases,
                n_min: a.n_min,
                n_max: a.n_max,
                size_factor: a.size_factor,
                targets: a.targets,
                jobs: a.jobs,
            };
            let report = pipeline_experiment(&cfg)?;
            if a.csv {
                return Ok(Payload::Csv(to_csv(&report.cases)?));
            }
            Ok(Payload::Json {
                result: json!({ "kind": "pipeline", "report": report }),
                failure: None,
                seed: Some(a.seed),
            })
        }
        ExperimentCommand::Diderrich(a) => {
            let reports = a
                .moduli
                .iter()
                .map(|&n| diderrich_probe(Modulus::new(n)?, a.budget))
                .collect::<Result<Vec<_>, _>>()?;
            if a.csv {
                let rows: Vec<DiderrichRow> = reports
                    .iter()
                    .map(|r| DiderrichRow {
                        n: r.n,
                        smallest_prime: r.smallest_prime,
                        reference: r.reference,
                        m_star: r.m_star,
                        max_incomplete_size: r.max_incomplete_size,
                        threshold_equals_reference: r.threshold_equals_reference,
                        max_incomplete_equals_reference: r.max_incomplete_equals_reference,
                    })
                    .collect();
                return Ok(Payload::Csv(to_csv(&rows)?));
            }
            Payload::ok(json!({ "kind": "diderrich", "rows": reports }))
        }
    }
}

fn dispatch(cmd: &Command) -> Result<Payload, Error> {
    match cmd {
        Command::Sumset(a) => cmd_sumset(a),
        Command::Complete(a) => cmd_complete(a),
        Command::Witness(a) => cmd_witness(a),
        Command::Decompose(a) => cmd_decompose(a),
        Command::Ap(a) => cmd_ap(a),
        Command::Threshold(a) => cmd_threshold(a),
        Command::Extremal(a) => cmd_extremal(a),
        Command::Experiment(e) => cmd_experiment(e),
    }
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Output {
    let started = Instant::now();
    let command = cli.command.name();
    let inputs = serde_json::to_value(&cli.command).unwrap_or(Value::Null);
    let payload = match dispatch(&cli.command) {
        Ok(p) => p,
        Err(e) => match failure_reason(&e) {
            Some(reason) => Payload::Json {
                result: Value::Null,
                failure: Some(format!("{reason}: {e}")),
                seed: None,
            },
            None => {
                return Output {
                    code: 2,
                    stdout: String::new(),
                    stderr: format!("error: {e}\n"),
                }
            }
        },
    };
    match payload {
        Payload::Csv(text) => Output {
            code: 0,
            stdout: text,
            stderr: String::new(),
        },
        Payload::Json {
            result,
            failure,
            seed,
        } => {
            let code = if failure.is_some() { 1 } else { 0 };
            let report = RunReport {
                schema: SCHEMA_ID.to_string(),
                command: command.to_string(),
                inputs,
                status: if failure.is_some() { "failed" } else { "ok" }.to_string(),
                reason: failure,
                result,
                seed,
                engine_version: env!("CARGO_PKG_VERSION").to_string(),
                wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
            };
            let mut stdout = serde_json::to_string_pretty(&report).expect("report serializes");
            stdout.push('\n');
            Output {
                code,
                stdout,
                stderr: String::new(),
            }
        }
    }
}

/// Parses and runs; usage errors become exit code 2.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                Output {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Output {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}

/// Checks a report against the field lists in [`SCHEMA`].
pub fn validate_report(report: &Value) -> Result<(), String> {
    let schema: Value = serde_json::from_str(SCHEMA).map_err(|e| e.to_string())?;
    let require = |obj: &Value, fields: &Value, what: &str| -> Result<(), String> {
        for f in fields.as_array().into_iter().flatten() {
            let f = f.as_str().unwrap_or_default();
            if obj.get(f).is_none() {
                return Err(format!("{what}: missing field {f:?}"));
            }
        }
        Ok(())
    };
    require(report, &schema["report"]["required"], "report")?;
    if report["schema"] != SCHEMA_ID {
        return Err(format!("unexpected schema id {}", report["schema"]));
    }
    let command = report["command"].as_str().ok_or("command is not a string")?;
    let spec = schema["commands"]
        .get(command)
        .ok_or_else(|| format!("unknown command {command:?}"))?;
    if report["status"] == "ok" {
        require(&report["result"], &spec["required"], command)?;
    }
    Ok(())
}

/// A report with its timing fields removed, for reproducibility comparisons.
pub fn without_timing(report: &Value) -> Value {
    let mut v = report.clone();
    if let Some(obj) = v.as_object_mut() {
        obj.remove("wall_time_ms");
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_json(args: &[&str]) -> (i32, Value) {
        let out = run(std::iter::once("zncomplete").chain(args.iter().copied()));
        let v = if out.stdout.is_empty() {
            Value::Null
        } else {
            serde_json::from_str(&out.stdout).unwrap()
        };
        (out.code, v)
    }

    #[test]
    fn parse_set_forms() {
        assert_eq!(parse_set("1, 2,3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_set("").unwrap(), Vec::<i64>::new());
        assert_eq!(parse_set("-1,4").unwrap(), vec![-1, 4]);
        assert!(parse_set("1,x").is_err());
        let dir = std::env::temp_dir().join(format!("zncomplete-set-{}", std::process::id()));
        std::fs::write(&dir, "# header\n3\n 5 # five\n\n7\n").unwrap();
        let spec = format!("@{}", dir.display());
        assert_eq!(parse_set(&spec).unwrap(), vec![3, 5, 7]);
        std::fs::remove_file(&dir).unwrap();
        assert!(parse_set("@/nonexistent/zncomplete").is_err());
    }

    #[test]
    fn runs_collapse() {
        assert_eq!(runs([0, 1, 2, 5, 7, 8].into_iter()), vec![[0, 2], [5, 5], [7, 8]]);
    }

    #[test]
    fn sumset_examples() {
        let (code, v) = run_json(&["sumset", "--modulus", "4", "--set", "1,2"]);
        assert_eq!(code, 0);
        assert_eq!(v["result"]["members"], json!([0, 1, 2, 3]));
        let (_, v) = run_json(&["sumset", "--set", "1,2,3", "--exact-l", "2"]);
        assert_eq!(v["result"]["kind"], "integers");
        assert_eq!(v["result"]["members"], json!([3, 4, 5]));
        let (_, v) = run_json(&["sumset", "--modulus", "5", "--set", ""]);
        assert_eq!(v["result"]["members"], json!([0]));
        let (_, v) = run_json(&["sumset", "--set", "1,2,3", "--rle"]);
        assert_eq!(v["result"]["runs"], json!([[0, 6]]));
    }

    #[test]
    fn witness_and_complete() {
        let (code, v) = run_json(&["witness", "--modulus", "4", "--set", "1,2", "--target", "3"]);
        assert_eq!(code, 0);
        assert_eq!(v["result"]["picks"], json!([1, 2]));
        let (code, v) = run_json(&["witness", "--modulus", "8", "--set", "2,4", "--target", "5"]);
        assert_eq!(code, 1);
        assert_eq!(v["status"], "failed");
        assert!(v["reason"].as_str().unwrap().starts_with("unreachable"));
        let (code, v) = run_json(&["complete", "--modulus", "8", "--set", "1,2,3"]);
        assert_eq!(code, 0);
        assert_eq!(v["result"]["complete"], false);
        assert_eq!(v["result"]["missing"], json!([7]));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["zncomplete", "witness", "--modulus", "4"]).code, 2);
        assert_eq!(run(["zncomplete", "complete", "--modulus", "1", "--set", "1"]).code, 2);
        assert_eq!(run(["zncomplete", "complete", "--modulus", "5", "--set", "0"]).code, 2);
        assert_eq!(run(["zncomplete", "threshold", "--modulus", "7", "--mode", "sampled"]).code, 2);
        assert_eq!(run(["zncomplete", "bogus"]).code, 2);
        assert_eq!(run(["zncomplete", "--help"]).code, 0);
    }

    #[test]
    fn decompose_with_fallback() {
        let (code, v) = run_json(&["decompose", "--modulus", "6", "--set", "1,5", "--target", "3", "--split", "1"]);
        assert_eq!(code, 1);
        assert_eq!(v["result"]["path"], "none");
        let (code, v) = run_json(&[
            "decompose", "--modulus", "6", "--set", "1,5", "--target", "1", "--split", "1", "--fallback", "dp",
        ]);
        assert_eq!(code, 0);
        assert_eq!(v["result"]["path"], "dp");
        assert_eq!(v["result"]["witness"]["picks"], json!([1]));
        let (code, _) = run_json(&["decompose", "--modulus", "6", "--set", "1,2", "--target", "1"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn reports_validate() {
        let cases: &[&[&str]] = &[
            &["sumset", "--modulus", "7", "--set", "1,3"],
            &["complete", "--modulus", "7", "--set", "1,3"],
            &["witness", "--modulus", "7", "--set", "1,3", "--target", "4"],
            &["ap", "--set", "1,2,3,4,5,6", "--exact-l", "3", "--ratio", "0.5"],
            &["ap", "--set", "3,5,9", "--target-length", "3"],
            &["threshold", "--modulus", "7"],
            &["threshold", "--modulus", "11", "--mode", "sampled", "--seed", "4", "--trials", "20"],
            &["extremal", "--family", "divisor", "--modulus", "12"],
            &["experiment", "diderrich", "--moduli", "6,8"],
            &["experiment", "corollary", "--modulus", "49", "--c", "2,4", "--trials", "5", "--seed", "1"],
        ];
        for args in cases {
            let (code, v) = run_json(args);
            assert_eq!(code, 0, "{args:?}");
            validate_report(&v).unwrap_or_else(|e| panic!("{args:?}: {e}"));
            let back: RunReport = serde_json::from_value(v.clone()).unwrap();
            assert_eq!(serde_json::to_value(&back).unwrap(), v);
        }
    }
}
