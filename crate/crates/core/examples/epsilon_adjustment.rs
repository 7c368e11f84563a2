//! Setting probabilities that drift from 1/2 by up to epsilon raise the
//! null success probability of the binary test.
use chcert::pvalue_engine::{binomial_pvalue, epsilon_model, Parity};

fn main() -> chcert::Result<()> {
    let (j, m) = (2414, 65876);
    for eps in [0.0, 0.001, 0.003, 0.006, 0.01] {
        let model = epsilon_model(eps)?;
        let p = binomial_pvalue(j, m, model.adjusted_p0, Parity::Strict)?;
        println!("eps {eps:<6} p0 {:.6}  p {:.3e}", model.adjusted_p0, p.p_value);
    }
    Ok(())
}
