use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use super::json_input::{parse_distribution_json, parse_weights_json};
use super::report::{finite, AnalysisReport, Envelope, SettingMarginals};
use super::trials_csv::{parse_trials_path, write_trials};
use crate::adversary_sim::{simulate_adversary, simulate_run, AdversaryReport, SimulationConfig};
use crate::error::{Error, Result};
use crate::lhv_polytope::{
    check_constraints_with_tolerance, fine_construct, induced_non00_distribution, random_local_mixture,
    step_candidates, ConstraintReport, DeterministicStrategy, FineConstruction,
};
use crate::pvalue_engine::{
    analyze, analyze_statistic, exact_pvalue_dp, lattice_target, mcdiarmid_bound, AnalysisOptions, Method, Parity,
    Policy,
};
use crate::rational::{format_ratio, half, parse_ratio, Ratio};
use crate::trial_model::{reduce_trials, BuiltinSpec, OutcomeDistribution, StepSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_PARAMETERS: i32 = 3;

/// Exit code for an engine error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Data { .. } | Error::Parse { .. } | Error::EmptySupport(_) | Error::Io(_) | Error::Json(_) => EXIT_DATA,
        Error::InvalidParameter(_)
        | Error::Domain(_)
        | Error::DegenerateStrategy(_)
        | Error::IncompatibleMethod { .. }
        | Error::Invariant(_) => EXIT_PARAMETERS,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "chcert", version, about = "Memory-robust p-values for Clauser-Horne trial data")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Worker threads for the DP and simulations; 0 uses all available.
    #[arg(long, default_value_t = 0, global = true)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SpecArgs {
    /// J, J_E2, J_E3, Ch, or Jgen (needs --p-a and --p-b).
    #[arg(long, default_value = "J")]
    spec: String,
    /// Probability of setting a, for Jgen and candidate derivation.
    #[arg(long = "p-a")]
    p_a: Option<String>,
    /// Probability of setting b.
    #[arg(long = "p-b")]
    p_b: Option<String>,
}

#[derive(Debug, Args)]
struct TestArgs {
    #[arg(long, default_value = "binomial")]
    method: String,
    /// Bound on each setting's deviation from 1/2.
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Accept (J, m) of opposite parity, rounding #(+1) up.
    #[arg(long)]
    lenient_parity: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// p-value of a trial file.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        test: TestArgs,
        /// Dataset label; defaults to the file name.
        #[arg(long)]
        dataset: Option<String>,
    },
    /// p-value of a statistic value L after m relevant trials.
    Pvalue {
        #[arg(long = "L", allow_hyphen_values = true)]
        l: String,
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        test: TestArgs,
    },
    /// McDiarmid bound on P(Ch ≥ L) after m steps.
    Bound {
        #[arg(long = "L", allow_hyphen_values = true)]
        l: i64,
        #[arg(long)]
        m: u64,
    },
    /// Draw i.i.d. trials from an outcome distribution.
    Simulate {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        runs: u64,
        #[command(flatten)]
        spec: SpecArgs,
        /// Also compute a p-value per run.
        #[arg(long)]
        method: Option<String>,
        /// Rescale the distribution to sum to 1.
        #[arg(long)]
        normalize: bool,
        /// Write run 0 as CSV.
        #[arg(long)]
        trials_out: Option<PathBuf>,
    },
    /// Local polytope tools.
    #[command(group(ArgGroup::new("mode").required(true).args(["check", "strategies", "fine", "mixture"])))]
    Polytope {
        /// Check a distribution against the local constraints.
        #[arg(long)]
        check: Option<PathBuf>,
        /// List the sixteen deterministic strategies.
        #[arg(long)]
        strategies: bool,
        /// Build the i.i.d. per-trial realization of a strategy mixture.
        #[arg(long)]
        fine: Option<PathBuf>,
        /// Mixture of induced distributions for the given weights.
        #[arg(long)]
        mixture: Option<PathBuf>,
        /// Tolerance for distributions given as printed decimals.
        #[arg(long, default_value_t = 0.0)]
        tolerance: f64,
        #[arg(long)]
        normalize: bool,
    },
    /// Optimal adaptive adversary for target L over m steps.
    Policy {
        #[arg(long = "L", allow_hyphen_values = true)]
        l: String,
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        spec: SpecArgs,
        /// Where to write the policy JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replay the policy this many times.
        #[arg(long)]
        simulate: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn resolve_spec(args: &SpecArgs) -> Result<(StepSpec, (Ratio, Ratio))> {
    let probs = |a: &Option<String>| a.as_deref().map(parse_ratio).transpose();
    let (pa, pb) = (probs(&args.p_a)?, probs(&args.p_b)?);
    if args.spec.eq_ignore_ascii_case("jgen") {
        let (Some(pa), Some(pb)) = (pa, pb) else {
            return Err(Error::invalid("Jgen needs --p-a and --p-b"));
        };
        return Ok((StepSpec::generalized_j(&pa, &pb)?, (pa, pb)));
    }
    let which: BuiltinSpec = args.spec.parse()?;
    Ok((StepSpec::builtin(which), (pa.unwrap_or_else(half), pb.unwrap_or_else(half))))
}

fn options(test: &TestArgs, probs: (Ratio, Ratio)) -> Result<(Method, AnalysisOptions)> {
    let method: Method = test.method.parse()?;
    let parity = if test.lenient_parity { Parity::Lenient } else { Parity::Strict };
    Ok((method, AnalysisOptions { epsilon: test.epsilon, parity, candidates: None, setting_probabilities: Some(probs) }))
}

#[derive(Serialize)]
struct PvalueReport {
    spec: String,
    method: Method,
    statistic: String,
    m: u64,
    p_value: f64,
    ln_p_value: Option<f64>,
    is_bound: bool,
    epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    p0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lattice_target: Option<i64>,
}

#[derive(Serialize)]
struct BoundReport {
    method: Method,
    l: i64,
    m: u64,
    p_value: f64,
    ln_p_value: Option<f64>,
    is_bound: bool,
}

#[derive(Serialize)]
struct RunSummary {
    run: u64,
    n_trials: u64,
    m: u64,
    statistic: String,
    statistic_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_value: Option<f64>,
}

#[derive(Serialize)]
struct SimulationReport {
    spec: String,
    n: u64,
    runs: u64,
    seeds: Vec<u64>,
    distribution: OutcomeDistribution,
    results: Vec<RunSummary>,
}

#[derive(Serialize)]
struct CheckReport {
    #[serde(flatten)]
    constraints: ConstraintReport,
    statistic_slacks: std::collections::BTreeMap<String, String>,
}

#[derive(Serialize)]
struct StrategyEntry {
    index: u8,
    label: String,
    induced: Option<OutcomeDistribution>,
}

#[derive(Serialize)]
struct FineReport {
    #[serde(flatten)]
    construction: FineConstruction,
    conditional_matches_mixture: bool,
}

#[derive(Serialize)]
struct PolicyFile<'a> {
    l: i64,
    m: u64,
    candidates: &'a [crate::pvalue_engine::LatticeCandidate],
    policy: &'a Policy,
}

#[derive(Serialize)]
struct PolicyReport {
    spec: String,
    statistic: String,
    l: i64,
    m: u64,
    p_value: f64,
    ln_p_value: Option<f64>,
    candidates: Vec<String>,
    policy_runs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    simulation: Option<AdversaryReport>,
}

#[derive(Serialize)]
struct ErrorReport {
    error: String,
    exit_code: i32,
}

fn envelope<T: Serialize>(kind: &'static str, body: T) -> Result<Value> {
    Ok(serde_json::to_value(Envelope::new(kind, body))?)
}

fn run(command: Command) -> Result<Value> {
    match command {
        Command::Analyze { file, spec, test, dataset } => {
            let (step_spec, probs) = resolve_spec(&spec)?;
            let (method, opts) = options(&test, probs)?;
            let trials = parse_trials_path(&file)?;
            let walk = reduce_trials(&trials, &step_spec)?;
            let analysis = analyze(&walk, &step_spec, method, &opts)?;
            let name = dataset.unwrap_or_else(|| {
                file.file_name().map_or_else(|| file.display().to_string(), |n| n.to_string_lossy().into_owned())
            });
            envelope("analysis", AnalysisReport::new(name, analysis, SettingMarginals::from_trials(&trials)))
        }
        Command::Pvalue { l, m, spec, test } => {
            let (step_spec, probs) = resolve_spec(&spec)?;
            let (method, opts) = options(&test, probs)?;
            let a = analyze_statistic(&step_spec, &parse_ratio(&l)?, m, method, &opts)?;
            envelope(
                "pvalue",
                PvalueReport {
                    spec: a.spec,
                    method,
                    statistic: format_ratio(&a.statistic),
                    m,
                    p_value: a.p_value,
                    ln_p_value: finite(a.ln_p_value),
                    is_bound: a.is_bound,
                    epsilon: a.epsilon,
                    p0: a.p0,
                    sigma: a.sigma,
                    lattice_target: a.lattice_target,
                },
            )
        }
        Command::Bound { l, m } => {
            let t = mcdiarmid_bound(l, m)?;
            envelope(
                "bound",
                BoundReport {
                    method: Method::Mcdiarmid,
                    l,
                    m,
                    p_value: t.p_value,
                    ln_p_value: finite(t.ln_p_value),
                    is_bound: true,
                },
            )
        }
        Command::Simulate { dist, n, seed, runs, spec, method, normalize, trials_out } => {
            let distribution = parse_distribution_json(&fs::read_to_string(&dist)?, normalize)?;
            let (step_spec, probs) = resolve_spec(&spec)?;
            let method = method.map(|m| m.parse::<Method>()).transpose()?;
            let cfg = SimulationConfig { distribution, n_trials: n, runs, seed };
            let opts = AnalysisOptions { setting_probabilities: Some(probs), ..Default::default() };
            let mut results = Vec::new();
            for run in 0..runs {
                let trials = simulate_run(&cfg, run)?;
                if run == 0 {
                    if let Some(path) = &trials_out {
                        write_trials(fs::File::create(path)?, &trials)?;
                    }
                }
                let walk = reduce_trials(&trials, &step_spec)?;
                let p_value = match method {
                    Some(m) if walk.m() > 0 => Some(analyze(&walk, &step_spec, m, &opts)?.p_value),
                    _ => None,
                };
                results.push(RunSummary {
                    run,
                    n_trials: n,
                    m: walk.m(),
                    statistic: format_ratio(&walk.final_value),
                    statistic_value: crate::rational::to_f64(&walk.final_value),
                    p_value,
                });
            }
            envelope(
                "simulation",
                SimulationReport {
                    spec: step_spec.name().to_string(),
                    n,
                    runs,
                    seeds: vec![seed],
                    distribution: cfg.distribution,
                    results,
                },
            )
        }
        Command::Polytope { check, strategies, fine, mixture, tolerance, normalize } => {
            if let Some(path) = check {
                let d = parse_distribution_json(&fs::read_to_string(path)?, normalize)?;
                let statistic_slacks = BuiltinSpec::ALL
                    .iter()
                    .map(|&b| (b.name().to_string(), format_ratio(&StepSpec::builtin(b).constraint_value(&d))))
                    .collect();
                envelope(
                    "polytope_check",
                    CheckReport { constraints: check_constraints_with_tolerance(&d, tolerance), statistic_slacks },
                )
            } else if strategies {
                let list: Vec<StrategyEntry> = DeterministicStrategy::all()
                    .map(|v| StrategyEntry {
                        index: v.index,
                        label: v.label(),
                        induced: induced_non00_distribution(&v, &half(), &half()).ok(),
                    })
                    .collect();
                envelope("strategies", serde_json::json!({ "strategies": list }))
            } else if let Some(path) = fine {
                let weights = parse_weights_json(&fs::read_to_string(path)?)?;
                let construction = fine_construct(&weights)?;
                let conditional_matches_mixture =
                    construction.distribution.condition_non00()? == random_local_mixture(&weights)?;
                envelope("fine_construction", FineReport { construction, conditional_matches_mixture })
            } else if let Some(path) = mixture {
                let weights = parse_weights_json(&fs::read_to_string(path)?)?;
                let d = random_local_mixture(&weights)?;
                envelope("mixture", serde_json::json!({ "distribution": d }))
            } else {
                unreachable!("clap requires one mode")
            }
        }
        Command::Policy { l, m, spec, out, simulate, seed } => {
            let (step_spec, (pa, pb)) = resolve_spec(&spec)?;
            let set = step_candidates(&step_spec, &pa, &pb)?;
            let statistic = parse_ratio(&l)?;
            let target = lattice_target(&statistic, &set)?;
            let dp = exact_pvalue_dp(target, m, &set, true)?;
            let policy = dp.policy.as_ref().expect("policy requested");
            if let Some(path) = &out {
                let file = PolicyFile { l: target, m, candidates: &dp.candidates, policy };
                fs::write(path, serde_json::to_vec(&file)?)?;
            }
            let simulation = simulate.map(|runs| simulate_adversary(&dp, target, m, runs, seed)).transpose()?;
            envelope(
                "policy",
                PolicyReport {
                    spec: step_spec.name().to_string(),
                    statistic: format_ratio(&statistic),
                    l: target,
                    m,
                    p_value: dp.p_value,
                    ln_p_value: finite(dp.ln_p_value),
                    candidates: set.distributions().map(|d| d.describe()).collect(),
                    policy_runs: policy.rows.iter().map(|r| r.runs.len()).sum(),
                    out: out.map(|p| p.display().to_string()),
                    simulation,
                },
            )
        }
    }
}

fn render_text(value: &Value, prefix: &str, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                render_text(v, &key, out);
            }
        }
        Value::Array(items) if items.len() > 16 => out.push_str(&format!("{prefix}: [{} entries]\n", items.len())),
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                render_text(v, &format!("{prefix}[{i}]"), out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

/// Runs one CLI invocation. The report goes to `out`, diagnostics to `err`.
/// Returns the process exit code.
pub fn cli_dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let format = cli.format;
    let result = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| Error::invalid(e.to_string()))
        .and_then(|pool| pool.install(|| run(cli.command)));
    let (doc, code) = match result {
        Ok(doc) => (doc, EXIT_OK),
        Err(e) => {
            let code = exit_code(&e);
            let _ = writeln!(err, "error: {e}");
            let doc = envelope("error", ErrorReport { error: e.to_string(), exit_code: code }).unwrap_or(Value::Null);
            (doc, code)
        }
    };
    let written = match format {
        Format::Json => serde_json::to_string_pretty(&doc).map(|s| s + "\n").unwrap_or_default(),
        Format::Text => {
            let mut s = String::new();
            render_text(&doc, "", &mut s);
            s
        }
    };
    if out.write_all(written.as_bytes()).is_err() {
        return EXIT_DATA;
    }
    code
}
