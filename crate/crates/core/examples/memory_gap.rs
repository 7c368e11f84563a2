//! A two-trial game where remembering the first result matters.
//!
//! Starting from 0 and needing to end at or above 0, the adaptive adversary
//! wins with probability 5/6; the best memoryless mixture only reaches 3/4.
use chcert::adversary_sim::memoryless_best;
use chcert::lhv_polytope::step_candidates;
use chcert::pvalue_engine::{exact_pvalue_dp, lattice_candidates};
use chcert::rational::half;
use chcert::trial_model::{BuiltinSpec, StepSpec};

fn main() -> chcert::Result<()> {
    let set = step_candidates(&StepSpec::builtin(BuiltinSpec::Ch), &half(), &half())?;
    let lattice = lattice_candidates(&set)?;
    for (l, m) in [(0, 2), (1, 3), (0, 4), (2, 10), (5, 40)] {
        let dp = exact_pvalue_dp(l, m, &set, false)?;
        let iid = memoryless_best(&lattice, l, m)?;
        println!(
            "L={l} m={m:<3} adaptive {:.6}  memoryless {:.6} (mix {:.3} of #{} with #{})",
            dp.p_value, iid.value, iid.q, iid.first, iid.second
        );
    }
    Ok(())
}
