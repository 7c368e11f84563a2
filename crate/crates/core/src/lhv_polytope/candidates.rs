use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::strategy::{strategy_distribution, DeterministicStrategy};
use crate::error::{Error, Result};
use crate::rational::{format_ratio, Ratio};
use crate::trial_model::StepSpec;

/// A probability vector over step values, largest value first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StepDistribution {
    entries: Vec<(Ratio, Ratio)>,
}

impl StepDistribution {
    /// Merges repeated values and drops zero-probability entries.
    pub fn new(entries: impl IntoIterator<Item = (Ratio, Ratio)>) -> Result<Self> {
        let mut merged: BTreeMap<Ratio, Ratio> = BTreeMap::new();
        for (value, prob) in entries {
            if prob.is_negative() {
                return Err(Error::invalid("negative step probability"));
            }
            *merged.entry(value).or_insert_with(Ratio::zero) += prob;
        }
        let total = merged.values().fold(Ratio::zero(), |a, p| a + p);
        if !total.is_one() {
            return Err(Error::invalid(format!("step probabilities sum to {}", format_ratio(&total))));
        }
        let entries = merged.into_iter().rev().filter(|(_, p)| !p.is_zero()).collect();
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(Ratio, Ratio)] {
        &self.entries
    }

    pub fn prob(&self, value: &Ratio) -> Ratio {
        self.entries
            .iter()
            .find(|(v, _)| v == value)
            .map_or_else(Ratio::zero, |(_, p)| p.clone())
    }

    /// `Σ s_j · P(s_j)`: the expected increment.
    pub fn mean(&self) -> Ratio {
        self.entries.iter().fold(Ratio::zero(), |a, (v, p)| a + v * p)
    }

    /// `P(step ≥ threshold)`.
    pub fn upper_tail(&self, threshold: &Ratio) -> Ratio {
        self.entries
            .iter()
            .filter(|(v, _)| v >= threshold)
            .fold(Ratio::zero(), |a, (_, p)| a + p)
    }

    /// First-order stochastic dominance: every upper tail at least as heavy.
    pub fn dominates(&self, other: &StepDistribution) -> bool {
        let mut thresholds: Vec<&Ratio> = self.entries.iter().chain(&other.entries).map(|(v, _)| v).collect();
        thresholds.sort();
        thresholds.dedup();
        thresholds.iter().all(|t| self.upper_tail(t) >= other.upper_tail(t))
    }

    /// Convex combination `w·self + (1-w)·other`.
    pub fn mix(&self, other: &StepDistribution, w: &Ratio) -> Result<StepDistribution> {
        let rest = Ratio::one() - w;
        StepDistribution::new(
            self.entries
                .iter()
                .map(|(v, p)| (v.clone(), p * w))
                .chain(other.entries.iter().map(|(v, p)| (v.clone(), p * &rest))),
        )
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(v, p)| format!("{}: {}", format_ratio(v), format_ratio(p)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl Serialize for StepDistribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<String, String> = self
            .entries
            .iter()
            .map(|(v, p)| (format_ratio(v), format_ratio(p)))
            .collect();
        map.serialize(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StepCandidate {
    pub distribution: StepDistribution,
    /// Strategies inducing this distribution; the first is the reported source.
    pub sources: Vec<u8>,
    /// `Σ c_j P(s_j)` with `c_j = s_j`.
    #[serde(with = "crate::rational::serde_ratio")]
    pub constraint_value: Ratio,
}

impl StepCandidate {
    pub fn source(&self) -> u8 {
        self.sources[0]
    }

    pub fn is_saturating(&self) -> bool {
        self.constraint_value.is_zero()
    }
}

/// Step distributions a local adversary can realize on one relevant trial.
///
/// The local set is the convex hull of these; a maximizer over it is always
/// attained at one of them.
#[derive(Debug, Clone, Serialize)]
pub struct StepCandidateSet {
    pub spec_name: String,
    #[serde(skip)]
    lattice_scale: num_bigint::BigInt,
    pub candidates: Vec<StepCandidate>,
}

impl StepCandidateSet {
    /// Builds a set from explicit distributions (sources left as 0).
    pub fn from_distributions(
        spec: &StepSpec,
        dists: impl IntoIterator<Item = StepDistribution>,
    ) -> Result<Self> {
        let candidates: Vec<StepCandidate> = dists
            .into_iter()
            .map(|d| StepCandidate { constraint_value: d.mean(), distribution: d, sources: vec![0] })
            .collect();
        if candidates.is_empty() {
            return Err(Error::invalid("candidate set is empty"));
        }
        Ok(Self { spec_name: spec.name().to_string(), lattice_scale: spec.lattice_scale().clone(), candidates })
    }

    pub fn lattice_scale(&self) -> &num_bigint::BigInt {
        &self.lattice_scale
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn distributions(&self) -> impl Iterator<Item = &StepDistribution> {
        self.candidates.iter().map(|c| &c.distribution)
    }

    pub fn find(&self, dist: &StepDistribution) -> Option<usize> {
        self.candidates.iter().position(|c| &c.distribution == dist)
    }

    /// Only the candidates whose constraint value is exactly zero.
    pub fn saturating(&self) -> Self {
        self.filtered(|c, _| c.is_saturating())
    }

    /// Drops candidates stochastically dominated by another. With monotone
    /// success columns a dominated candidate is never strictly better, so the
    /// DP value is unchanged.
    pub fn undominated(&self) -> Self {
        let all = &self.candidates;
        self.filtered(|c, i| {
            !all.iter()
                .enumerate()
                .any(|(j, other)| j != i && other.distribution.dominates(&c.distribution) && !(c.distribution.dominates(&other.distribution) && j > i))
        })
    }

    /// Reorders candidates; `order` lists current indices.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        let mut candidates = Vec::with_capacity(order.len());
        for &i in order {
            if i >= self.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::invalid(format!("bad candidate order {order:?}")));
            }
            candidates.push(self.candidates[i].clone());
        }
        Ok(Self { candidates, ..self.clone() })
    }

    pub fn is_supermartingale(&self) -> bool {
        self.candidates.iter().all(|c| !c.constraint_value.is_positive())
    }

    fn filtered(&self, keep: impl Fn(&StepCandidate, usize) -> bool) -> Self {
        let candidates = self
            .candidates
            .iter()
            .enumerate()
            .filter(|(i, c)| keep(c, *i))
            .map(|(_, c)| c.clone())
            .collect();
        Self { candidates, ..self.clone() }
    }
}

/// For every strategy with positive mass on the spec's relevant outcomes, the
/// conditional law of the step given a relevant outcome. Exact duplicates are
/// merged, keeping strategy order.
pub fn step_candidates(spec: &StepSpec, p_a: &Ratio, p_b: &Ratio) -> Result<StepCandidateSet> {
    let mut candidates: Vec<StepCandidate> = Vec::new();
    for v in DeterministicStrategy::all() {
        let full = strategy_distribution(&v, p_a, p_b)?;
        let mass = full.mass_on(spec.relevant_set());
        if mass.is_zero() {
            continue;
        }
        let dist = StepDistribution::new(
            spec.relevant_set()
                .map(|o| (spec.step(o).cloned().expect("relevant"), full.weight(o) / &mass)),
        )?;
        match candidates.iter_mut().find(|c| c.distribution == dist) {
            Some(existing) => existing.sources.push(v.index),
            None => candidates.push(StepCandidate { constraint_value: dist.mean(), distribution: dist, sources: vec![v.index] }),
        }
    }
    if candidates.is_empty() {
        return Err(Error::invalid(format!("no strategy reaches the outcomes of {}", spec.name())));
    }
    Ok(StepCandidateSet {
        spec_name: spec.name().to_string(),
        lattice_scale: spec.lattice_scale().clone(),
        candidates,
    })
}
