//! Reads a trial CSV and reports every statistic with every applicable method.
//!
//! ```text
//! cargo run --release --example analyze_csv -- path/to/trials.csv
//! ```
use chcert::io_cli::{parse_trials_path, SettingMarginals};
use chcert::pvalue_engine::{analyze, AnalysisOptions, Method};
use chcert::trial_model::{reduce_trials, BuiltinSpec, StepSpec};

fn main() -> chcert::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/run_3000.csv").into());
    let trials = parse_trials_path(&path)?;
    let marginals = SettingMarginals::from_trials(&trials);
    println!("{} trials, P(a) = {:.4}, P(b) = {:.4}", marginals.n_trials, marginals.p_a, marginals.p_b);
    for w in marginals.warnings() {
        println!("warning: {w}");
    }

    let opts = AnalysisOptions::default();
    for which in [BuiltinSpec::J, BuiltinSpec::JE2, BuiltinSpec::JE3, BuiltinSpec::Ch] {
        let spec = StepSpec::builtin(which);
        let walk = reduce_trials(&trials, &spec)?;
        for method in [Method::Binomial, Method::Normal, Method::Mcdiarmid, Method::ExactDp] {
            match analyze(&walk, &spec, method, &opts) {
                Ok(a) => println!(
                    "{:<5} = {:>5} over m = {:<5} {:<10} p = {:.3e}{}",
                    spec.name(),
                    walk.final_value,
                    walk.m(),
                    method.to_string(),
                    a.p_value,
                    if a.is_bound { " (bound)" } else { "" }
                ),
                Err(e) => println!("{:<5} {:<10} skipped: {e}", spec.name(), method.to_string()),
            }
        }
    }
    Ok(())
}
