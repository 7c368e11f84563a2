//! Prints the last few columns of the backward induction for `Ch`: the
//! adversary's best success probability one and two trials from the end,
//! and which candidate law it picks at each position.
use chcert::lhv_polytope::step_candidates;
use chcert::pvalue_engine::success_column;
use chcert::rational::half;
use chcert::trial_model::{BuiltinSpec, StepSpec};

fn main() -> chcert::Result<()> {
    let set = step_candidates(&StepSpec::builtin(BuiltinSpec::Ch), &half(), &half())?;
    for (i, c) in set.candidates.iter().enumerate() {
        println!("candidate {i}: {} from strategies {:?}", c.distribution.describe(), c.sources);
    }

    let target = 100;
    for remaining in 1..=3 {
        println!("\n{remaining} trial(s) left");
        for (x, value, choice) in success_column(target, remaining, &set, (target - 4)..=(target + 3))? {
            let pick = choice.map_or("-".to_string(), |c| set.candidates[c].distribution.describe());
            println!("  x = L{:+}  P = {value:.6}  play {pick}", x - target);
        }
    }
    Ok(())
}
