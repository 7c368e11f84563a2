use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::dp::{exact_pvalue_dp, lattice_target};
use super::tails::{binomial_pvalue, epsilon_model, mcdiarmid_bound, normal_sigma, Parity};
use crate::error::{Error, Result};
use crate::lhv_polytope::{step_candidates, StepCandidateSet, StepDistribution};
use crate::rational::{format_ratio, from_f64, half, int, to_f64, Ratio, FLOAT_ENTRY_DIGITS};
use crate::trial_model::{BuiltinSpec, ReducedWalk, StepSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Binomial,
    Normal,
    Mcdiarmid,
    ExactDp,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Binomial => "binomial",
            Method::Normal => "normal",
            Method::Mcdiarmid => "mcdiarmid",
            Method::ExactDp => "exact-dp",
        }
    }

    /// Whether the reported number is an upper bound rather than an exact p-value.
    pub fn is_bound(self) -> bool {
        matches!(self, Method::Mcdiarmid)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "binomial" => Ok(Method::Binomial),
            "normal" => Ok(Method::Normal),
            "mcdiarmid" | "azuma" => Ok(Method::Mcdiarmid),
            "exact-dp" | "exact" | "dp" => Ok(Method::ExactDp),
            other => Err(Error::invalid(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct AnalysisOptions {
    pub epsilon: f64,
    pub parity: Parity,
    /// Overrides the candidates derived from the spec.
    pub candidates: Option<StepCandidateSet>,
    /// Setting probabilities used to derive candidates; default 1/2 each.
    pub setting_probabilities: Option<(Ratio, Ratio)>,
}

/// What [`analyze`] computed, before dataset metadata is attached.
#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub spec: String,
    #[serde(with = "crate::rational::serde_ratio")]
    pub statistic: Ratio,
    pub statistic_value: f64,
    pub m: u64,
    pub method: Method,
    pub p_value: f64,
    pub ln_p_value: f64,
    pub is_bound: bool,
    pub epsilon: f64,
    /// Null bound on `P(step = +1)` for binary statistics.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p0: Option<f64>,
    /// `σ` distance for the normal method.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_target: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<String>>,
}

fn integer_statistic(value: &Ratio) -> Result<i64> {
    if !value.is_integer() {
        return Err(Error::invalid("statistic is not an integer"));
    }
    value.to_integer().to_i64().ok_or_else(|| Error::invalid("statistic too large"))
}

/// Candidates a local adversary has for `spec`, with the ε adjustment for
/// binary statistics.
pub fn default_candidates(spec: &StepSpec, options: &AnalysisOptions) -> Result<StepCandidateSet> {
    if let Some(c) = &options.candidates {
        return Ok(c.clone());
    }
    if options.epsilon > 0.0 {
        if !spec.is_unit_binary() {
            return Err(Error::IncompatibleMethod {
                method: "exact-dp".into(),
                reason: format!("epsilon adjustment is defined only for ±1 statistics, not {}", spec.name()),
            });
        }
        let p0 = from_f64(epsilon_model(options.epsilon)?.adjusted_p0, FLOAT_ENTRY_DIGITS)?;
        let biased = StepDistribution::new([(int(1), p0.clone()), (int(-1), int(1) - p0)])?;
        let down = StepDistribution::new([(int(-1), int(1))])?;
        return StepCandidateSet::from_distributions(spec, [biased, down]);
    }
    let (pa, pb) = options.setting_probabilities.clone().unwrap_or_else(|| (half(), half()));
    step_candidates(spec, &pa, &pb)
}

/// Computes a p-value or bound for a reduced walk.
pub fn analyze(walk: &ReducedWalk, spec: &StepSpec, method: Method, options: &AnalysisOptions) -> Result<Analysis> {
    if walk.spec_name != spec.name() {
        return Err(Error::invalid(format!("walk was reduced with {}, not {}", walk.spec_name, spec.name())));
    }
    analyze_statistic(spec, &walk.final_value, walk.m(), method, options)
}

/// [`analyze`] from the final position and step count alone.
pub fn analyze_statistic(
    spec: &StepSpec,
    statistic: &Ratio,
    m: u64,
    method: Method,
    options: &AnalysisOptions,
) -> Result<Analysis> {
    if m == 0 {
        return Err(Error::EmptySupport(format!("no trial is relevant to {}", spec.name())));
    }
    let eps = epsilon_model(options.epsilon)?;
    let mut out = Analysis {
        spec: spec.name().to_string(),
        statistic: statistic.clone(),
        statistic_value: to_f64(statistic),
        m,
        method,
        p_value: f64::NAN,
        ln_p_value: f64::NAN,
        is_bound: method.is_bound(),
        epsilon: options.epsilon,
        p0: None,
        sigma: None,
        lattice_target: None,
        candidates: None,
    };
    let binary_only = |name: &str| Error::IncompatibleMethod {
        method: name.into(),
        reason: format!("{} is not a ±1 statistic", spec.name()),
    };
    match method {
        Method::Binomial | Method::Normal => {
            if !spec.is_unit_binary() {
                return Err(binary_only(method.name()));
            }
            let j = integer_statistic(statistic)?;
            let p0 = eps.adjusted_p0;
            out.p0 = Some(p0);
            if method == Method::Binomial {
                let t = binomial_pvalue(j, m, p0, options.parity)?;
                out.p_value = t.p_value;
                out.ln_p_value = t.ln_p_value;
            } else {
                let sigma = normal_sigma(j, m, p0);
                let p = 0.5 * statrs::function::erf::erfc(sigma / std::f64::consts::SQRT_2);
                out.sigma = Some(sigma);
                out.p_value = p;
                out.ln_p_value = p.ln();
            }
        }
        Method::Mcdiarmid => {
            if spec != &StepSpec::builtin(BuiltinSpec::Ch) {
                return Err(Error::IncompatibleMethod {
                    method: method.name().into(),
                    reason: "the bound is implemented for the Ch step set only".into(),
                });
            }
            if options.epsilon > 0.0 {
                return Err(Error::IncompatibleMethod {
                    method: method.name().into(),
                    reason: "no epsilon adjustment exists for this bound".into(),
                });
            }
            let t = mcdiarmid_bound(integer_statistic(statistic)?, m)?;
            out.p_value = t.p_value;
            out.ln_p_value = t.ln_p_value;
        }
        Method::ExactDp => {
            let set = default_candidates(spec, options)?;
            let target = lattice_target(statistic, &set)?;
            let pruned = set.undominated();
            let r = exact_pvalue_dp(target, m, &pruned, false)?;
            out.p_value = r.p_value;
            out.ln_p_value = r.ln_p_value;
            out.lattice_target = Some(target);
            out.candidates = Some(set.distributions().map(StepDistribution::describe).collect());
            if options.epsilon > 0.0 {
                out.p0 = Some(eps.adjusted_p0);
            }
        }
    }
    Ok(out)
}

/// Exact statistic as text.
pub fn describe_statistic(a: &Analysis) -> String {
    format_ratio(&a.statistic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trial_model::{out, reduce_trials, trials_from_outcomes};

    fn walk_of(names: &[&str], spec: &StepSpec) -> ReducedWalk {
        reduce_trials(&trials_from_outcomes(names.iter().map(|n| out(n))), spec).unwrap()
    }

    #[test]
    fn table_one_binomial() {
        let j = StepSpec::builtin(BuiltinSpec::J);
        let walk = walk_of(&["++ab'", "+0ab'", "0+a'b", "00ab", "++ab", "0+ab"], &j);
        assert_eq!(walk.m(), 3);
        let a = analyze(&walk, &j, Method::Binomial, &AnalysisOptions::default()).unwrap();
        assert!((a.p_value - 0.875).abs() < 1e-14);
        let dp = analyze(&walk, &j, Method::ExactDp, &AnalysisOptions::default()).unwrap();
        assert!((dp.p_value - 0.875).abs() < 1e-14);
    }

    #[test]
    fn ch_rejects_binomial() {
        let ch = StepSpec::builtin(BuiltinSpec::Ch);
        let walk = walk_of(&["++ab'", "+0ab"], &ch);
        let err = analyze(&walk, &ch, Method::Binomial, &AnalysisOptions::default()).unwrap_err();
        assert!(matches!(err, Error::IncompatibleMethod { .. }));
    }

    #[test]
    fn epsilon_raises_binary_pvalue() {
        let j = StepSpec::builtin(BuiltinSpec::J);
        let walk = walk_of(&["++ab"; 6], &j);
        let plain = analyze(&walk, &j, Method::ExactDp, &AnalysisOptions::default()).unwrap();
        let opts = AnalysisOptions { epsilon: 0.05, ..Default::default() };
        let adj = analyze(&walk, &j, Method::ExactDp, &opts).unwrap();
        let bin = analyze(&walk, &j, Method::Binomial, &opts).unwrap();
        assert!(adj.p_value > plain.p_value);
        assert!((adj.p_value - bin.p_value).abs() < 1e-12);
    }

    #[test]
    fn method_names_round_trip() {
        for m in [Method::Binomial, Method::Normal, Method::Mcdiarmid, Method::ExactDp] {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
    }
}
