//! Builds a full sixteen-outcome distribution whose non-00 conditional is a
//! given mixture of the clicking strategies.
use chcert::lhv_polytope::{fine_construct, random_local_mixture};
use chcert::rational::ratio;

fn main() -> chcert::Result<()> {
    let mut weights = vec![ratio(0, 1); 15];
    weights[0] = ratio(1, 2);
    weights[8] = ratio(1, 3);
    weights[14] = ratio(1, 6);

    let fine = fine_construct(&weights)?;
    println!("x={} y={} z={} s={} t={} u={}", fine.x, fine.y, fine.z, fine.s, fine.t, fine.u);
    println!("mass on 00: {}", fine.zero_mass);
    for (k, p) in fine.distribution.to_named() {
        println!("  {k:>7} {p}");
    }
    let conditional = fine.distribution.condition_non00()?;
    println!("conditional equals mixture: {}", conditional == random_local_mixture(&weights)?);
    Ok(())
}
