use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::distribution::OutcomeDistribution;
use super::outcome::{out, Outcome};
use crate::error::{Error, Result};
use crate::rational::{format_ratio, int, lcm_of_denominators, Ratio};

/// The four statistics with fixed integer steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BuiltinSpec {
    J,
    #[serde(rename = "J_E2")]
    JE2,
    #[serde(rename = "J_E3")]
    JE3,
    Ch,
}

impl BuiltinSpec {
    pub const ALL: [BuiltinSpec; 4] = [BuiltinSpec::J, BuiltinSpec::JE2, BuiltinSpec::JE3, BuiltinSpec::Ch];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinSpec::J => "J",
            BuiltinSpec::JE2 => "J_E2",
            BuiltinSpec::JE3 => "J_E3",
            BuiltinSpec::Ch => "Ch",
        }
    }
}

impl fmt::Display for BuiltinSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BuiltinSpec::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown statistic {s:?}; expected J, J_E2, J_E3 or Ch")))
    }
}

/// Maps relevant outcomes to walk steps.
///
/// Outcomes without a step are skipped by the reduction. Step values are exact;
/// `lattice_scale` times any step is an integer, which is what the DP works on.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSpec {
    name: String,
    steps: Vec<Option<Ratio>>,
    lattice_scale: BigInt,
}

impl StepSpec {
    /// Builds a custom spec. Every mapped outcome must be non-00 with a nonzero step.
    pub fn new(name: impl Into<String>, mapping: impl IntoIterator<Item = (Outcome, Ratio)>) -> Result<Self> {
        let mut steps = vec![None; Outcome::COUNT];
        for (o, value) in mapping {
            if o.is_00() {
                return Err(Error::invalid(format!("00 outcome {o} cannot carry a step")));
            }
            if value.is_zero() {
                return Err(Error::invalid(format!("zero step for {o}")));
            }
            if steps[o.index()].replace(value).is_some() {
                return Err(Error::invalid(format!("outcome {o} mapped twice")));
            }
        }
        if steps.iter().all(Option::is_none) {
            return Err(Error::invalid("spec maps no outcomes"));
        }
        let lattice_scale = lcm_of_denominators(steps.iter().flatten());
        Ok(Self { name: name.into(), steps, lattice_scale })
    }

    pub fn builtin(which: BuiltinSpec) -> Self {
        let table: &[(&str, i64)] = match which {
            BuiltinSpec::J => &[("++ab", 1), ("+0ab'", -1), ("0+a'b", -1), ("++a'b'", -1)],
            BuiltinSpec::JE2 => &[("++ab'", 1), ("+0ab", -1), ("0+a'b", -1), ("++a'b'", -1)],
            BuiltinSpec::JE3 => &[("++a'b", 1), ("+0ab'", -1), ("0+ab", -1), ("++a'b'", -1)],
            BuiltinSpec::Ch => &[
                ("++ab'", 1),
                ("++a'b", 1),
                ("+0ab", -1),
                ("0+ab", -1),
                ("+0ab'", -1),
                ("0+a'b", -1),
                ("++a'b'", -2),
            ],
        };
        Self::new(which.name(), table.iter().map(|&(n, v)| (out(n), int(v))))
            .expect("built-in tables are well formed")
    }

    /// The J statistic reweighted for setting probabilities `p_a`, `p_b`.
    pub fn generalized_j(p_a: &Ratio, p_b: &Ratio) -> Result<Self> {
        let inside = |p: &Ratio| p.is_positive() && p < &Ratio::one();
        if !inside(p_a) || !inside(p_b) {
            return Err(Error::invalid(format!(
                "setting probabilities must lie strictly inside (0, 1), got {} and {}",
                format_ratio(p_a),
                format_ratio(p_b)
            )));
        }
        let q_a = Ratio::one() - p_a;
        let q_b = Ratio::one() - p_b;
        let name = format!("Jgen({},{})", format_ratio(p_a), format_ratio(p_b));
        Self::new(
            name,
            [
                (out("++ab"), (p_a * p_b).recip()),
                (out("+0ab'"), -(p_a * &q_b).recip()),
                (out("0+a'b"), -(&q_a * p_b).recip()),
                (out("++a'b'"), -(&q_a * &q_b).recip()),
            ],
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn step(&self, outcome: Outcome) -> Option<&Ratio> {
        self.steps[outcome.index()].as_ref()
    }

    pub fn lattice_scale(&self) -> &BigInt {
        &self.lattice_scale
    }

    /// Step for `outcome` on the integer lattice.
    pub fn lattice_step(&self, outcome: Outcome) -> Option<i64> {
        self.step(outcome).map(|v| self.to_lattice(v))
    }

    pub(crate) fn to_lattice(&self, value: &Ratio) -> i64 {
        let scaled = value * Ratio::from_integer(self.lattice_scale.clone());
        debug_assert!(scaled.is_integer());
        scaled.to_integer().to_i64().expect("lattice step fits in i64")
    }

    pub fn relevant_set(&self) -> impl Iterator<Item = Outcome> + '_ {
        Outcome::all().filter(|o| self.steps[o.index()].is_some())
    }

    pub fn plus_set(&self) -> Vec<(Outcome, Ratio)> {
        self.mapped().filter(|(_, v)| v.is_positive()).collect()
    }

    pub fn minus_set(&self) -> Vec<(Outcome, Ratio)> {
        self.mapped().filter(|(_, v)| v.is_negative()).collect()
    }

    fn mapped(&self) -> impl Iterator<Item = (Outcome, Ratio)> + '_ {
        Outcome::all().filter_map(|o| self.steps[o.index()].clone().map(|v| (o, v)))
    }

    pub fn distinct_values(&self) -> BTreeSet<Ratio> {
        self.steps.iter().flatten().cloned().collect()
    }

    /// True when every step is exactly +1 or -1.
    pub fn is_unit_binary(&self) -> bool {
        self.steps.iter().flatten().all(|v| v.abs().is_one())
            && self.distinct_values().len() == 2
    }

    /// `Σ step(o) · p(o)` over mapped outcomes: the linear form whose sign the
    /// local bound controls.
    pub fn constraint_value(&self, dist: &OutcomeDistribution) -> Ratio {
        self.mapped()
            .fold(Ratio::zero(), |acc, (o, v)| acc + v * dist.weight(o))
    }
}
