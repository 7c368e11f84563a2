//! Binary statistics reduce to a fair-coin tail. Compare the exact tail with
//! the normal approximation on a few datasets of realistic size.
use chcert::pvalue_engine::{binomial_pvalue, normal_sigma, Parity};

fn main() -> chcert::Result<()> {
    let rows = [(591, 9380), (573, 10175), (206, 8624), (245, 9937), (126715, 2011897)];
    println!("{:>8} {:>9} {:>12} {:>12} {:>10} {:>8}", "J", "m", "strict", "lenient", "ln p", "sigma");
    for (j, m) in rows {
        // strict parity rejects (J, m) pairs no ±1 walk can produce
        let strict = match binomial_pvalue(j, m, 0.5, Parity::Strict) {
            Ok(t) => format!("{:.4e}", t.p_value),
            Err(_) => "parity".into(),
        };
        let lenient = binomial_pvalue(j, m, 0.5, Parity::Lenient)?;
        println!(
            "{j:>8} {m:>9} {strict:>12} {:>12.4e} {:>10.2} {:>8.2}",
            lenient.p_value,
            lenient.ln_p_value,
            normal_sigma(j, m, 0.5)
        );
    }
    Ok(())
}
