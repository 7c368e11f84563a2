use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::distribution::{OutcomeDistribution, SupportMode};
use super::outcome::{Detection, Outcome, Setting1, Setting2};
use super::step_spec::StepSpec;
use crate::error::{Error, Result};
use crate::rational::Ratio;

/// One discrete trial: two settings and two binary results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrialRecord {
    /// 1-based, strictly increasing within a dataset.
    pub index: u64,
    pub setting1: Setting1,
    pub setting2: Setting2,
    pub result1: Detection,
    pub result2: Detection,
}

impl TrialRecord {
    pub fn new(index: u64, outcome: Outcome) -> Self {
        Self {
            index,
            setting1: outcome.setting1(),
            setting2: outcome.setting2(),
            result1: outcome.result1(),
            result2: outcome.result2(),
        }
    }

    pub fn outcome(&self) -> Outcome {
        Outcome::new(self.result1, self.result2, self.setting1, self.setting2)
    }
}

/// Builds records numbered 1, 2, ... from a list of outcomes.
pub fn trials_from_outcomes(outcomes: impl IntoIterator<Item = Outcome>) -> Vec<TrialRecord> {
    outcomes
        .into_iter()
        .enumerate()
        .map(|(i, o)| TrialRecord::new(i as u64 + 1, o))
        .collect()
}

/// The step sequence extracted from a trial stream by a [`StepSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedWalk {
    pub spec_name: String,
    pub steps: Vec<Ratio>,
    pub final_value: Ratio,
    pub tally: BTreeMap<Ratio, u64>,
    lattice_scale: BigInt,
}

impl ReducedWalk {
    pub fn m(&self) -> u64 {
        self.steps.len() as u64
    }

    pub fn lattice_scale(&self) -> &BigInt {
        &self.lattice_scale
    }

    pub fn count(&self, value: &Ratio) -> u64 {
        self.tally.get(value).copied().unwrap_or(0)
    }
}

/// Keeps exactly the trials whose outcome the spec maps, in trial order.
pub fn reduce_trials(trials: &[TrialRecord], spec: &StepSpec) -> Result<ReducedWalk> {
    let mut previous = 0u64;
    let mut steps = Vec::new();
    let mut tally: BTreeMap<Ratio, u64> = BTreeMap::new();
    let mut final_value = Ratio::zero();
    for t in trials {
        if t.index == 0 {
            return Err(Error::Data { index: t.index, reason: "trial indices are 1-based".into() });
        }
        if t.index <= previous {
            return Err(Error::Data {
                index: t.index,
                reason: format!("index does not increase (previous {previous})"),
            });
        }
        previous = t.index;
        if let Some(step) = spec.step(t.outcome()) {
            final_value += step;
            *tally.entry(step.clone()).or_default() += 1;
            steps.push(step.clone());
        }
    }
    Ok(ReducedWalk {
        spec_name: spec.name().to_string(),
        steps,
        final_value,
        tally,
        lattice_scale: spec.lattice_scale().clone(),
    })
}

/// Relative frequencies of the non-00 outcomes plus raw setting marginals.
#[derive(Debug, Clone)]
pub struct EmpiricalSummary {
    pub distribution: OutcomeDistribution,
    pub p_a: Ratio,
    pub p_b: Ratio,
    pub n_trials: u64,
    pub n_non00: u64,
    pub counts: [u64; Outcome::COUNT],
}

pub fn empirical_distribution(trials: &[TrialRecord]) -> Result<EmpiricalSummary> {
    let mut counts = [0u64; Outcome::COUNT];
    let (mut n_a, mut n_b) = (0u64, 0u64);
    for t in trials {
        counts[t.outcome().index()] += 1;
        n_a += (t.setting1 == Setting1::A) as u64;
        n_b += (t.setting2 == Setting2::B) as u64;
    }
    let n_non00: u64 = Outcome::non00().map(|o| counts[o.index()]).sum();
    if n_non00 == 0 {
        return Err(Error::EmptySupport("no non-00 trials".into()));
    }
    let n = trials.len() as i64;
    let weights = Outcome::all()
        .map(|o| {
            if o.is_00() {
                Ratio::zero()
            } else {
                crate::rational::ratio(counts[o.index()] as i64, n_non00 as i64)
            }
        })
        .collect();
    Ok(EmpiricalSummary {
        distribution: OutcomeDistribution::new(weights, SupportMode::Non00)?,
        p_a: crate::rational::ratio(n_a as i64, n),
        p_b: crate::rational::ratio(n_b as i64, n),
        n_trials: trials.len() as u64,
        n_non00,
        counts,
    })
}
