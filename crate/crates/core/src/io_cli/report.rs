use serde::Serialize;

use crate::pvalue_engine::{Analysis, Method};
use crate::trial_model::{Setting1, Setting2, TrialRecord};
use crate::ENGINE_VERSION;

/// Warning threshold for setting marginals, in binomial standard errors.
pub const MARGINAL_WARNING_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Serialize)]
pub struct SettingMarginals {
    pub n_trials: u64,
    pub n_a: u64,
    pub n_b: u64,
    pub p_a: f64,
    pub p_b: f64,
    /// `(p̂ - 1/2)` in standard errors of a fair coin.
    pub z_a: f64,
    pub z_b: f64,
}

impl SettingMarginals {
    pub fn from_counts(n_trials: u64, n_a: u64, n_b: u64) -> Self {
        let n = n_trials.max(1) as f64;
        let se = (0.25 / n).sqrt();
        let (p_a, p_b) = (n_a as f64 / n, n_b as f64 / n);
        Self { n_trials, n_a, n_b, p_a, p_b, z_a: (p_a - 0.5) / se, z_b: (p_b - 0.5) / se }
    }

    pub fn from_trials(trials: &[TrialRecord]) -> Self {
        let n_a = trials.iter().filter(|t| t.setting1 == Setting1::A).count() as u64;
        let n_b = trials.iter().filter(|t| t.setting2 == Setting2::B).count() as u64;
        Self::from_counts(trials.len() as u64, n_a, n_b)
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, p, z) in [("a", self.p_a, self.z_a), ("b", self.p_b, self.z_b)] {
            if z.abs() > MARGINAL_WARNING_SIGMAS {
                out.push(format!(
                    "setting {name} chosen in {:.4}% of trials ({z:+.1} standard errors from 1/2); consider --epsilon",
                    100.0 * p
                ));
            }
        }
        out
    }
}

/// Smallest multiple of `granularity` at or above the larger marginal
/// deviation from 1/2.
pub fn suggest_epsilon(marginals: &SettingMarginals, granularity: f64) -> f64 {
    let dev = (marginals.p_a - 0.5).abs().max((marginals.p_b - 0.5).abs());
    suggest_epsilon_from_deviation(dev, granularity)
}

pub fn suggest_epsilon_from_deviation(deviation: f64, granularity: f64) -> f64 {
    let steps = (deviation / granularity - 1e-9).ceil().max(0.0);
    // Round the product so 6 * 0.001 prints as 0.006.
    let digits = (-granularity.log10()).ceil().max(0.0) as i32 + 3;
    let scale = 10f64.powi(digits);
    (steps * granularity * scale).round() / scale
}

pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// Common envelope of every JSON document the CLI prints.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope<T: Serialize> {
    pub kind: &'static str,
    pub engine_version: &'static str,
    pub timestamp: String,
    #[serde(flatten)]
    pub body: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(kind: &'static str, body: T) -> Self {
        Self { kind, engine_version: ENGINE_VERSION, timestamp: timestamp(), body }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub dataset: String,
    pub spec: String,
    /// Exact final walk position.
    pub statistic: String,
    pub statistic_value: f64,
    pub m: u64,
    pub method: Method,
    pub p_value: f64,
    pub ln_p_value: Option<f64>,
    pub is_bound: bool,
    pub epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    pub marginals: SettingMarginals,
    pub suggested_epsilon: f64,
    pub warnings: Vec<String>,
    pub seeds: Vec<u64>,
}

impl AnalysisReport {
    pub fn new(dataset: impl Into<String>, analysis: Analysis, marginals: SettingMarginals) -> Self {
        let warnings = marginals.warnings();
        Self {
            dataset: dataset.into(),
            spec: analysis.spec,
            statistic: crate::rational::format_ratio(&analysis.statistic),
            statistic_value: analysis.statistic_value,
            m: analysis.m,
            method: analysis.method,
            p_value: analysis.p_value,
            ln_p_value: finite(analysis.ln_p_value),
            is_bound: analysis.is_bound,
            epsilon: analysis.epsilon,
            p0: analysis.p0,
            sigma: analysis.sigma,
            suggested_epsilon: suggest_epsilon(&marginals, 1e-3),
            marginals,
            warnings,
            seeds: Vec::new(),
        }
    }
}

/// `None` for infinities, which JSON cannot carry (`ln 0`).
pub fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_suggestions() {
        let m = SettingMarginals { n_trials: 10_000, n_a: 5010, n_b: 5058, p_a: 0.5010, p_b: 0.5058, z_a: 0.0, z_b: 0.0 };
        assert_eq!(suggest_epsilon(&m, 1e-3), 0.006);
        assert_eq!(suggest_epsilon(&SettingMarginals::from_counts(100, 50, 50), 1e-3), 0.0);
        assert_eq!(suggest_epsilon_from_deviation(0.02, 1e-3), 0.02);
    }

    #[test]
    fn warnings_at_three_sigma() {
        assert!(SettingMarginals::from_counts(10_000, 5000, 5100).warnings().is_empty());
        assert_eq!(SettingMarginals::from_counts(10_000, 5000, 5200).warnings().len(), 1);
    }
}
