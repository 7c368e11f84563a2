//! Exact p-value for a `Ch` walk by backward induction.
//!
//! ```text
//! cargo run --release --example exact_ch_pvalue -- 1135 20395
//! ```
use std::time::Instant;

use chcert::lhv_polytope::step_candidates;
use chcert::pvalue_engine::exact_pvalue_dp;
use chcert::rational::half;
use chcert::trial_model::{BuiltinSpec, StepSpec};

fn main() -> chcert::Result<()> {
    let args: Vec<i64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (l, m) = match args[..] {
        [l, m] => (l, m as u64),
        _ => (447, 19359),
    };
    // dominated laws never help the adversary
    let set = step_candidates(&StepSpec::builtin(BuiltinSpec::Ch), &half(), &half())?.undominated();
    let t = Instant::now();
    let r = exact_pvalue_dp(l, m, &set, false)?;
    println!("Ch >= {l} after {m} relevant trials");
    println!("p = {:.6e}  (ln p = {:.4})  in {:.2?}", r.p_value, r.ln_p_value, t.elapsed());
    Ok(())
}
