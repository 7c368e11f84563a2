use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{half, is_probability, Ratio};
use crate::trial_model::{Detection, Outcome, OutcomeDistribution, Setting1, Setting2, SupportMode};

use Detection::{Plus as P, Zero as Z};

/// Outcome assignments for `(a, a', b, b')`, one row per strategy, v1 first.
const TABLE: [[Detection; 4]; 16] = [
    [P, P, P, P],
    [Z, P, P, P],
    [P, Z, P, P],
    [P, P, Z, P],
    [P, P, P, Z],
    [Z, Z, P, P],
    [P, P, Z, Z],
    [Z, P, P, Z],
    [P, Z, Z, P],
    [P, Z, P, Z],
    [Z, P, Z, P],
    [Z, Z, Z, P],
    [Z, Z, P, Z],
    [Z, P, Z, Z],
    [P, Z, Z, Z],
    [Z, Z, Z, Z],
];

/// An instruction set fixing each detector's result for each of its settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DeterministicStrategy {
    /// 1..=16.
    pub index: u8,
    /// Results for settings `a, a', b, b'`.
    pub assignment: [Detection; 4],
}

impl DeterministicStrategy {
    pub fn get(index: u8) -> Result<Self> {
        if !(1..=16).contains(&index) {
            return Err(Error::invalid(format!("strategy index {index} outside 1..=16")));
        }
        Ok(Self { index, assignment: TABLE[index as usize - 1] })
    }

    pub fn all() -> impl Iterator<Item = DeterministicStrategy> {
        (1..=16).map(|k| Self { index: k, assignment: TABLE[k as usize - 1] })
    }

    /// The fifteen strategies that eventually produce a click.
    pub fn clicking() -> impl Iterator<Item = DeterministicStrategy> {
        Self::all().take(15)
    }

    pub fn outcome(&self, s1: Setting1, s2: Setting2) -> Outcome {
        let r1 = self.assignment[s1 as usize];
        let r2 = self.assignment[2 + s2 as usize];
        Outcome::new(r1, r2, s1, s2)
    }

    /// Compact label such as `(0,+,0,+)`.
    pub fn label(&self) -> String {
        let parts: Vec<&str> = self.assignment.iter().map(|d| d.token()).collect();
        format!("({})", parts.join(","))
    }
}

/// Outcome distribution of a strategy when settings are drawn independently
/// with `P(a) = p_a`, `P(b) = p_b`.
pub fn strategy_distribution(v: &DeterministicStrategy, p_a: &Ratio, p_b: &Ratio) -> Result<OutcomeDistribution> {
    if !is_probability(p_a) || !is_probability(p_b) {
        return Err(Error::invalid("setting probabilities must lie in [0, 1]"));
    }
    let mut weights = vec![Ratio::zero(); Outcome::COUNT];
    for s1 in Setting1::ALL {
        let w1 = if s1 == Setting1::A { p_a.clone() } else { Ratio::one() - p_a };
        for s2 in Setting2::ALL {
            let w2 = if s2 == Setting2::B { p_b.clone() } else { Ratio::one() - p_b };
            weights[v.outcome(s1, s2).index()] += &w1 * &w2;
        }
    }
    OutcomeDistribution::new(weights, SupportMode::Full16)
}

/// The strategy's distribution conditioned on a non-00 outcome.
pub fn induced_non00_distribution(v: &DeterministicStrategy, p_a: &Ratio, p_b: &Ratio) -> Result<OutcomeDistribution> {
    let full = strategy_distribution(v, p_a, p_b)?;
    full.condition_non00().map_err(|_| Error::DegenerateStrategy(v.index))
}

/// Equiprobable-settings shorthand used by the polytope routines.
pub(crate) fn induced_equiprobable(v: &DeterministicStrategy) -> Result<OutcomeDistribution> {
    induced_non00_distribution(v, &half(), &half())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::trial_model::out;

    #[test]
    fn table_rows_are_distinct_and_complete() {
        let all: std::collections::HashSet<_> = DeterministicStrategy::all().map(|v| v.assignment).collect();
        assert_eq!(all.len(), 16);
        assert_eq!(DeterministicStrategy::get(1).unwrap().assignment, [P; 4]);
        assert_eq!(DeterministicStrategy::get(16).unwrap().assignment, [Z; 4]);
        assert!(DeterministicStrategy::get(0).is_err());
        assert!(DeterministicStrategy::get(17).is_err());
    }

    #[test]
    fn v11_full_distribution() {
        let v11 = DeterministicStrategy::get(11).unwrap();
        assert_eq!(v11.label(), "(0,+,0,+)");
        let d = strategy_distribution(&v11, &half(), &half()).unwrap();
        for name in ["00ab", "0+ab'", "+0a'b", "++a'b'"] {
            assert_eq!(d.weight(out(name)), &ratio(1, 4), "{name}");
        }
    }

    #[test]
    fn v9_full_distribution() {
        let d = strategy_distribution(&DeterministicStrategy::get(9).unwrap(), &half(), &half()).unwrap();
        for name in ["+0ab", "++ab'", "00a'b", "0+a'b'"] {
            assert_eq!(d.weight(out(name)), &ratio(1, 4), "{name}");
        }
    }

    #[test]
    fn v16_is_all_00() {
        let v16 = DeterministicStrategy::get(16).unwrap();
        let d = strategy_distribution(&v16, &ratio(1, 3), &ratio(3, 4)).unwrap();
        assert_eq!(d.mass_on(Outcome::all().filter(|o| o.is_00())), ratio(1, 1));
        assert!(matches!(induced_non00_distribution(&v16, &half(), &half()), Err(Error::DegenerateStrategy(16))));
    }

    #[test]
    fn induced_v11_and_v1() {
        let d = induced_equiprobable(&DeterministicStrategy::get(11).unwrap()).unwrap();
        for name in ["0+ab'", "+0a'b", "++a'b'"] {
            assert_eq!(d.weight(out(name)), &ratio(1, 3));
        }
        let d1 = induced_equiprobable(&DeterministicStrategy::get(1).unwrap()).unwrap();
        for name in ["++ab", "++ab'", "++a'b", "++a'b'"] {
            assert_eq!(d1.weight(out(name)), &ratio(1, 4));
        }
    }

    #[test]
    fn non00_mass_groups() {
        for v in DeterministicStrategy::clicking() {
            let mass = strategy_distribution(&v, &half(), &half()).unwrap().non00_mass();
            let expected = match v.index {
                1..=7 => ratio(1, 1),
                8..=11 => ratio(3, 4),
                _ => ratio(1, 2),
            };
            assert_eq!(mass, expected, "v{}", v.index);
        }
    }
}
