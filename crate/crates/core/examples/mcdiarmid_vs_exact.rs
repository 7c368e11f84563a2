use chcert::lhv_polytope::step_candidates;
use chcert::pvalue_engine::{exact_pvalue_dp, mcdiarmid_bound};
use chcert::rational::half;
use chcert::trial_model::{BuiltinSpec, StepSpec};

// The closed-form bound is cheap but loose; the gap grows with L/m.
fn main() -> chcert::Result<()> {
    let set = step_candidates(&StepSpec::builtin(BuiltinSpec::Ch), &half(), &half())?.undominated();
    for (l, m) in [(10, 100), (30, 400), (100, 2000), (447, 19359), (1135, 20395)] {
        let bound = mcdiarmid_bound(l, m)?.p_value;
        let exact = exact_pvalue_dp(l, m, &set, false)?.p_value;
        println!("L={l:>5} m={m:>6}  exact {exact:.3e}  bound {bound:.3e}  ratio {:.1}", bound / exact);
    }
    Ok(())
}
