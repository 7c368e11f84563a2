//! The sixteen deterministic strategies, what they induce on the non-00
//! outcomes, and how two published tables sit against the local constraints.
use chcert::lhv_polytope::{check_constraints, induced_non00_distribution, DeterministicStrategy};
use chcert::rational::half;
use chcert::reference_data::{christensen_2013, giustina_2013_printed};
use chcert::trial_model::{BuiltinSpec, StepSpec};

fn main() -> chcert::Result<()> {
    for v in DeterministicStrategy::all() {
        match induced_non00_distribution(&v, &half(), &half()) {
            Ok(d) => {
                let named: Vec<String> = d.to_named().into_iter().map(|(k, p)| format!("{k}={p}")).collect();
                println!("v{:<2} {}", v.index, named.join(" "));
            }
            Err(e) => println!("v{:<2} {e}", v.index),
        }
    }

    for (name, d) in [("Giustina", giustina_2013_printed()), ("Christensen", christensen_2013()?)] {
        let r = check_constraints(&d);
        println!("\n{name}: normalized {}, local-boundary consistent {}", r.normalization_ok, r.is_local_boundary_consistent);
        for (i, s) in r.inequality_slacks.iter().enumerate() {
            println!("  inequality {i}: slack {s}");
        }
        for spec in [BuiltinSpec::J, BuiltinSpec::Ch] {
            println!("  E[{}] = {}", spec.name(), StepSpec::builtin(spec).constraint_value(&d));
        }
    }
    Ok(())
}
