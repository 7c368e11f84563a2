//! Published empirical non-00 distributions from two 2013 CH experiments.
//!
//! Values are the printed three-decimal frequencies. The Giustina table sums to
//! 0.999, so the `*_printed` forms are raw (unnormalized) and the plain forms
//! are rescaled to sum to one.

use crate::error::Result;
use crate::rational::parse_ratio;
use crate::trial_model::{out, OutcomeDistribution, SupportMode};

type Row = (&'static str, [&'static str; 3]);

const GIUSTINA: [Row; 4] = [
    ("ab", [".050", ".021", ".029"]),
    ("ab'", [".054", ".017", ".157"]),
    ("a'b", [".056", ".165", ".023"]),
    ("a'b'", [".003", ".217", ".207"]),
];

const CHRISTENSEN: [Row; 4] = [
    ("ab", [".044", ".026", ".026"]),
    ("ab'", [".049", ".020", ".162"]),
    ("a'b", [".051", ".172", ".019"]),
    ("a'b'", [".003", ".219", ".209"]),
];

fn printed(rows: &[Row; 4]) -> OutcomeDistribution {
    let mut weights = vec![num_traits::Zero::zero(); 16];
    for (settings, cells) in rows {
        for (results, value) in ["++", "+0", "0+"].iter().zip(cells) {
            let o = out(&format!("{results}{settings}"));
            weights[o.index()] = parse_ratio(value).expect("static table");
        }
    }
    OutcomeDistribution::raw(weights, SupportMode::Non00).expect("16 weights")
}

pub fn giustina_2013_printed() -> OutcomeDistribution {
    printed(&GIUSTINA)
}

pub fn christensen_2013_printed() -> OutcomeDistribution {
    printed(&CHRISTENSEN)
}

pub fn giustina_2013() -> Result<OutcomeDistribution> {
    OutcomeDistribution::normalized(printed(&GIUSTINA).weights().to_vec(), SupportMode::Non00)
}

pub fn christensen_2013() -> Result<OutcomeDistribution> {
    OutcomeDistribution::normalized(printed(&CHRISTENSEN).weights().to_vec(), SupportMode::Non00)
}
