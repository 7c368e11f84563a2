//! With unequal setting probabilities the plain `J` steps are no longer a
//! supermartingale. The generalized statistic rescales them; its candidate
//! laws and exact p-value depend on the setting probabilities.
use chcert::lhv_polytope::step_candidates;
use chcert::pvalue_engine::{exact_pvalue_dp, lattice_target};
use chcert::rational::ratio;
use chcert::trial_model::StepSpec;

fn main() -> chcert::Result<()> {
    for (pa, pb) in [(ratio(1, 2), ratio(1, 2)), (ratio(2, 5), ratio(1, 2)), (ratio(1, 3), ratio(3, 5))] {
        let spec = StepSpec::generalized_j(&pa, &pb)?;
        let set = step_candidates(&spec, &pa, &pb)?;
        println!("p_a = {pa}, p_b = {pb}: {} candidates, supermartingale {}", set.len(), set.is_supermartingale());
        for c in &set.undominated().candidates {
            println!("  {} (mean {})", c.distribution.describe(), c.distribution.mean());
        }
        let set = set.undominated();
        let mut steps = Vec::new();
        for k in [5, 10, 20] {
            let l = lattice_target(&ratio(k, 1), &set)?;
            steps.push(format!("Jgen >= {k}: {:.3e}", exact_pvalue_dp(l, 200, &set, false)?.p_value));
        }
        println!("  m = 200: {}", steps.join(", "));
    }
    Ok(())
}
