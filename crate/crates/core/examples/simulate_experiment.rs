//! Draws synthetic trial streams from a measured table and analyzes each one.
use chcert::pvalue_engine::{analyze, AnalysisOptions, Method};
use chcert::reference_data::giustina_2013;
use chcert::trial_model::{reduce_trials, BuiltinSpec, StepSpec};
use chcert::adversary_sim::{simulate_run, SimulationConfig};

fn main() -> chcert::Result<()> {
    let cfg = SimulationConfig { distribution: giustina_2013()?, n_trials: 200_000, runs: 5, seed: 2013 };
    let j = StepSpec::builtin(BuiltinSpec::J);
    let ch = StepSpec::builtin(BuiltinSpec::Ch);
    let opts = AnalysisOptions::default();
    for run in 0..cfg.runs {
        let trials = simulate_run(&cfg, run)?;
        let wj = reduce_trials(&trials, &j)?;
        let wch = reduce_trials(&trials, &ch)?;
        let pj = analyze(&wj, &j, Method::Binomial, &opts)?;
        let pch = analyze(&wch, &ch, Method::Mcdiarmid, &opts)?;
        println!(
            "run {run}: J={} m={} p={:.2e} | Ch={} m={} bound={:.2e}",
            wj.final_value,
            wj.m(),
            pj.p_value,
            wch.final_value,
            wch.m(),
            pch.p_value
        );
    }
    Ok(())
}
