use std::collections::HashMap;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use super::sampling::{outcome_sampler, run_rng, Categorical};
use crate::error::{Error, Result};
use crate::lhv_polytope::check_constraints;
use crate::rational::{to_f64, Ratio};
use crate::trial_model::{Outcome, OutcomeDistribution, StepSpec};

/// Condition on the walk's step history selecting a source rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Trigger {
    Always,
    /// No step has happened yet.
    Start,
    LastStepPositive,
    LastStepNegative,
    LastStepEquals(#[serde(with = "crate::rational::serde_ratio")] Ratio),
}

impl Trigger {
    fn matches(&self, last: Option<&Ratio>) -> bool {
        use num_traits::Signed;
        match (self, last) {
            (Trigger::Always, _) => true,
            (Trigger::Start, None) => true,
            (Trigger::LastStepPositive, Some(s)) => s.is_positive(),
            (Trigger::LastStepNegative, Some(s)) => s.is_negative(),
            (Trigger::LastStepEquals(v), Some(s)) => v == s,
            _ => false,
        }
    }
}

/// A history-dependent trial source: the first rule whose trigger matches the
/// last step picks the distribution of the next trial; the last rule is the
/// fallback.
#[derive(Debug, Clone, Serialize)]
pub struct MemorySequenceSpec {
    pub rules: Vec<(Trigger, OutcomeDistribution)>,
}

impl MemorySequenceSpec {
    /// Every rule's distribution must be a local mixture.
    pub fn new(rules: Vec<(Trigger, OutcomeDistribution)>) -> Result<Self> {
        for (i, (_, d)) in rules.iter().enumerate() {
            let report = check_constraints(d);
            if !report.is_local_boundary_consistent {
                return Err(Error::invalid(format!("rule {i} is not a local distribution")));
            }
        }
        Self::new_unchecked(rules)
    }

    /// Skips the locality check. Meant for negative controls.
    pub fn new_unchecked(rules: Vec<(Trigger, OutcomeDistribution)>) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::invalid("no rules"));
        }
        Ok(Self { rules })
    }

    /// Same distribution after every history.
    pub fn iid(dist: OutcomeDistribution) -> Result<Self> {
        Self::new(vec![(Trigger::Always, dist)])
    }

    fn pick(&self, last: Option<&Ratio>) -> usize {
        self.rules
            .iter()
            .position(|(t, _)| t.matches(last))
            .unwrap_or(self.rules.len() - 1)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifierConfig {
    pub runs: u64,
    pub trials_per_run: u64,
    /// Largest step index `k` examined.
    pub max_depth: u64,
    pub min_bucket_count: u64,
    pub seed: u64,
    /// Floor on the flagging threshold in standard errors.
    pub sigma_multiplier: f64,
    /// Family-wise false-flag rate used for the Bonferroni threshold.
    pub family_alpha: f64,
}

impl Default for VerifierConfig {
    fn default() -> Self {
        Self {
            runs: 1000,
            trials_per_run: 1000,
            max_depth: 64,
            min_bucket_count: 500,
            seed: 0,
            sigma_multiplier: 3.0,
            family_alpha: 0.01,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BucketCheck {
    pub k: u64,
    /// Most recent step last.
    pub history: Vec<f64>,
    pub count: u64,
    /// Empirical `Σ c_j P̂(s_j)`.
    pub statistic: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifierReport {
    pub trials: u64,
    pub steps: u64,
    pub buckets_examined: usize,
    pub threshold_sigmas: f64,
    pub violations: Vec<BucketCheck>,
    pub max_z: f64,
}

impl VerifierReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const HISTORY_LEN: usize = 8;

#[derive(Default)]
struct Moments {
    n: u64,
    sum: f64,
    sum_sq: f64,
}

/// Empirically checks that, for each step index and recent step history,
/// the conditional mean step of a local source stays at or below zero.
///
/// Histories are bucketed by `(k, last min(k-1, 8) steps)`. A bucket is
/// flagged when its mean exceeds the threshold in standard errors, where the
/// threshold is the larger of `sigma_multiplier` and the Bonferroni quantile
/// over all examined buckets.
pub fn verify_derived_supermartingale(
    seq: &MemorySequenceSpec,
    spec: &StepSpec,
    config: &VerifierConfig,
) -> Result<VerifierReport> {
    let samplers: Vec<Categorical<Outcome>> = seq
        .rules
        .iter()
        .map(|(_, d)| outcome_sampler(d))
        .collect::<Result<_>>()?;
    let values: Vec<Ratio> = spec.distinct_values().into_iter().collect();
    let step_code: Vec<Option<u8>> = Outcome::all()
        .map(|o| spec.step(o).map(|v| values.iter().position(|x| x == v).unwrap() as u8))
        .collect();
    let value_f: Vec<f64> = values.iter().map(to_f64).collect();

    let mut buckets: HashMap<(u64, Vec<u8>), Moments> = HashMap::new();
    let mut total_steps = 0u64;
    for run in 0..config.runs {
        let mut rng = run_rng(config.seed, run);
        let mut history: Vec<u8> = Vec::new();
        let mut k = 0u64;
        for _ in 0..config.trials_per_run {
            let last = history.last().map(|&c| &values[c as usize]);
            let rule = seq.pick(last);
            let o = samplers[rule].sample(&mut rng);
            let Some(code) = step_code[o.index()] else { continue };
            k += 1;
            total_steps += 1;
            if k <= config.max_depth {
                let keep = ((k - 1) as usize).min(HISTORY_LEN);
                let key = (k, history[history.len() - keep..].to_vec());
                let b = buckets.entry(key).or_default();
                let v = value_f[code as usize];
                b.n += 1;
                b.sum += v;
                b.sum_sq += v * v;
            }
            history.push(code);
            if history.len() > HISTORY_LEN {
                history.remove(0);
            }
        }
    }

    let examined: Vec<_> = buckets.iter().filter(|(_, b)| b.n >= config.min_bucket_count).collect();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let bonferroni = if examined.is_empty() {
        0.0
    } else {
        normal.inverse_cdf(1.0 - config.family_alpha / examined.len() as f64)
    };
    let threshold = config.sigma_multiplier.max(bonferroni);
    let mut violations = Vec::new();
    let mut max_z = f64::NEG_INFINITY;
    for ((k, hist), b) in &examined {
        let n = b.n as f64;
        let mean = b.sum / n;
        let var = (b.sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
        let se = (var / n).sqrt();
        let z = if se > 0.0 { mean / se } else if mean > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        max_z = max_z.max(z);
        if z > threshold {
            violations.push(BucketCheck {
                k: *k,
                history: hist.iter().map(|&c| value_f[c as usize]).collect(),
                count: b.n,
                statistic: mean,
                std_error: se,
            });
        }
    }
    violations.sort_by(|a, b| a.k.cmp(&b.k).then(a.history.partial_cmp(&b.history).unwrap()));
    Ok(VerifierReport {
        trials: config.runs * config.trials_per_run,
        steps: total_steps,
        buckets_examined: examined.len(),
        threshold_sigmas: threshold,
        violations,
        max_z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lhv_polytope::{induced_non00_distribution, DeterministicStrategy};
    use crate::rational::{half, ratio};
    use crate::trial_model::{out, BuiltinSpec, SupportMode};

    fn induced(k: u8) -> OutcomeDistribution {
        induced_non00_distribution(&DeterministicStrategy::get(k).unwrap(), &half(), &half()).unwrap()
    }

    fn small() -> VerifierConfig {
        VerifierConfig { runs: 8000, trials_per_run: 30, max_depth: 5, min_bucket_count: 500, seed: 3, ..Default::default() }
    }

    #[test]
    fn local_switching_source_passes() {
        let seq = MemorySequenceSpec::new(vec![(Trigger::LastStepPositive, induced(9)), (Trigger::Always, induced(1))]).unwrap();
        let r = verify_derived_supermartingale(&seq, &StepSpec::builtin(BuiltinSpec::Ch), &small()).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert!(r.buckets_examined > 0);
    }

    #[test]
    fn signaling_source_is_flagged() {
        let mut map = std::collections::BTreeMap::new();
        map.insert(out("++ab'"), ratio(3, 5));
        map.insert(out("+0ab"), ratio(2, 5));
        let bad = OutcomeDistribution::from_map(&map, SupportMode::Non00).unwrap();
        assert!(MemorySequenceSpec::iid(bad.clone()).is_err());
        let seq = MemorySequenceSpec::new_unchecked(vec![(Trigger::Always, bad)]).unwrap();
        let r = verify_derived_supermartingale(&seq, &StepSpec::builtin(BuiltinSpec::Ch), &small()).unwrap();
        assert!(!r.passed());
    }
}
