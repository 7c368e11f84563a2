//! Plays the optimal adaptive adversary against the DP's own answer.
//!
//! The success frequency over many replays should bracket the computed
//! p-value. Pass `L m runs` to change the game.
use chcert::adversary_sim::simulate_adversary;
use chcert::lhv_polytope::step_candidates;
use chcert::pvalue_engine::exact_pvalue_dp;
use chcert::rational::half;
use chcert::trial_model::{BuiltinSpec, StepSpec};

fn main() -> chcert::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (l, m, runs) = match args[..] {
        [l, m, runs] => (l as i64, m, runs),
        _ => (40, 1000, 20_000),
    };
    let set = step_candidates(&StepSpec::builtin(BuiltinSpec::Ch), &half(), &half())?;
    let dp = exact_pvalue_dp(l, m, &set, true)?;
    let policy = dp.policy.as_ref().expect("policy requested");
    let stored: usize = policy.rows.iter().map(|r| r.runs.len()).sum();
    println!("DP p = {:.6}; policy stored as {stored} runs over {m} rows", dp.p_value);

    let r = simulate_adversary(&dp, l, m, runs, 1)?;
    println!(
        "{} / {} successes, frequency {:.5}, 99% interval [{:.5}, {:.5}]",
        r.successes, r.runs, r.frequency, r.interval.lower, r.interval.upper
    );
    Ok(())
}
