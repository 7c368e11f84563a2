use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::rational::{from_f64, parse_ratio, Ratio, FLOAT_ENTRY_DIGITS};
use crate::trial_model::{Outcome, OutcomeDistribution, SupportMode};

fn value_to_ratio(v: &Value, what: &str) -> Result<Ratio> {
    match v {
        Value::String(s) => parse_ratio(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Ratio::from_integer(i.into())),
            None => from_f64(n.as_f64().unwrap_or(f64::NAN), FLOAT_ENTRY_DIGITS),
        },
        _ => Err(Error::Parse { line: 0, reason: format!("{what}: expected a number or a \"p/q\" string") }),
    }
}

/// Reads `{"++ab": "1/3", "+0a'b'": 0.1, ...}`. Missing outcomes weigh 0.
/// The mode is `full16` when a 00 outcome has weight, else `non00_12`.
/// With `normalize`, weights are rescaled to sum to 1.
pub fn parse_distribution_json(text: &str, normalize: bool) -> Result<OutcomeDistribution> {
    let value: Value = serde_json::from_str(text)?;
    let Value::Object(map) = value else {
        return Err(Error::Parse { line: 0, reason: "distribution must be a JSON object".into() });
    };
    let mut weights = vec![Ratio::zero(); Outcome::COUNT];
    for (name, v) in &map {
        let o: Outcome = name.parse()?;
        weights[o.index()] = value_to_ratio(v, name)?;
    }
    let mode = if Outcome::all().any(|o| o.is_00() && !weights[o.index()].is_zero()) {
        SupportMode::Full16
    } else {
        SupportMode::Non00
    };
    if normalize {
        OutcomeDistribution::normalized(weights, mode)
    } else {
        OutcomeDistribution::new(weights, mode)
    }
}

/// Reads strategy weights: an array of 15 (or 16) entries, or an object
/// keyed `v1`..`v16`.
pub fn parse_weights_json(text: &str) -> Result<Vec<Ratio>> {
    let value: Value = serde_json::from_str(text)?;
    match value {
        Value::Array(items) => items.iter().enumerate().map(|(i, v)| value_to_ratio(v, &format!("weight {}", i + 1))).collect(),
        Value::Object(map) => {
            let mut by_index: BTreeMap<usize, Ratio> = BTreeMap::new();
            for (key, v) in &map {
                let k: usize = key
                    .strip_prefix('v')
                    .and_then(|s| s.parse().ok())
                    .filter(|k| (1..=16).contains(k))
                    .ok_or_else(|| Error::Parse { line: 0, reason: format!("unknown strategy key {key:?}") })?;
                by_index.insert(k, value_to_ratio(v, key)?);
            }
            let v16 = by_index.remove(&16);
            Ok((1..=15).map(|k| by_index.remove(&k).unwrap_or_else(Ratio::zero)).chain(v16).collect())
        }
        _ => Err(Error::Parse { line: 0, reason: "weights must be a JSON array or object".into() }),
    }
}
