use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::outcome::Outcome;
use crate::error::{Error, Result};
use crate::rational::{format_ratio, from_f64, parse_ratio, to_f64, Ratio, FLOAT_ENTRY_DIGITS};

/// Absolute tolerance on the weight sum for float-origin distributions.
pub const FLOAT_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SupportMode {
    #[serde(rename = "full16")]
    Full16,
    #[serde(rename = "non00_12")]
    Non00,
}

/// Weights over the sixteen outcomes, held as exact rationals.
///
/// `new` enforces the probability-vector invariants. `raw` skips them so that
/// printed tables (which rarely sum to exactly one) can still be inspected by
/// the constraint checker.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    weights: Vec<Ratio>,
    mode: SupportMode,
}

impl OutcomeDistribution {
    pub fn new(weights: Vec<Ratio>, mode: SupportMode) -> Result<Self> {
        let dist = Self::raw(weights, mode)?;
        dist.validate()?;
        Ok(dist)
    }

    /// Builds without checking nonnegativity or normalization.
    pub fn raw(weights: Vec<Ratio>, mode: SupportMode) -> Result<Self> {
        if weights.len() != Outcome::COUNT {
            return Err(Error::invalid(format!("expected 16 weights, got {}", weights.len())));
        }
        Ok(Self { weights, mode })
    }

    /// Rescales nonnegative weights to sum to one.
    pub fn normalized(weights: Vec<Ratio>, mode: SupportMode) -> Result<Self> {
        let raw = Self::raw(weights, mode)?;
        if raw.weights.iter().any(Signed::is_negative) {
            return Err(Error::invalid("negative weight"));
        }
        let total = raw.total();
        if total.is_zero() {
            return Err(Error::EmptySupport("all weights are zero".into()));
        }
        let weights = raw.weights.into_iter().map(|w| w / &total).collect();
        Self::new(weights, mode)
    }

    /// Float entry point: values are rounded to `FLOAT_ENTRY_DIGITS` decimals, the
    /// sum must be within `FLOAT_SUM_TOLERANCE` of one, and the result is then
    /// renormalized exactly.
    pub fn from_f64(weights: &[f64], mode: SupportMode) -> Result<Self> {
        let converted = weights
            .iter()
            .map(|&w| from_f64(w, FLOAT_ENTRY_DIGITS))
            .collect::<Result<Vec<_>>>()?;
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > FLOAT_SUM_TOLERANCE {
            return Err(Error::invalid(format!("weights sum to {sum}, not 1")));
        }
        Self::normalized(converted, mode)
    }

    pub fn point_mass(outcome: Outcome) -> Self {
        let mut weights = vec![Ratio::zero(); Outcome::COUNT];
        weights[outcome.index()] = Ratio::one();
        let mode = if outcome.is_00() { SupportMode::Full16 } else { SupportMode::Non00 };
        Self { weights, mode }
    }

    /// Builds from a sparse map; unlisted outcomes get weight zero.
    pub fn from_map(entries: &BTreeMap<Outcome, Ratio>, mode: SupportMode) -> Result<Self> {
        let mut weights = vec![Ratio::zero(); Outcome::COUNT];
        for (o, w) in entries {
            weights[o.index()] = w.clone();
        }
        Self::new(weights, mode)
    }

    fn validate(&self) -> Result<()> {
        if let Some(o) = Outcome::all().find(|o| self.weights[o.index()].is_negative()) {
            return Err(Error::invalid(format!("negative weight on {o}")));
        }
        if self.mode == SupportMode::Non00 {
            if let Some(o) = Outcome::all().find(|o| o.is_00() && !self.weights[o.index()].is_zero()) {
                return Err(Error::invalid(format!("non00_12 distribution puts weight on {o}")));
            }
        }
        if !self.total().is_one() {
            return Err(Error::invalid(format!(
                "weights sum to {}, not 1",
                format_ratio(&self.total())
            )));
        }
        Ok(())
    }

    pub fn mode(&self) -> SupportMode {
        self.mode
    }

    pub fn weight(&self, outcome: Outcome) -> &Ratio {
        &self.weights[outcome.index()]
    }

    pub fn weights(&self) -> &[Ratio] {
        &self.weights
    }

    pub fn probabilities_f64(&self) -> Vec<f64> {
        self.weights.iter().map(to_f64).collect()
    }

    pub fn total(&self) -> Ratio {
        self.weights.iter().fold(Ratio::zero(), |acc, w| acc + w)
    }

    pub fn mass_on(&self, outcomes: impl IntoIterator<Item = Outcome>) -> Ratio {
        outcomes
            .into_iter()
            .fold(Ratio::zero(), |acc, o| acc + &self.weights[o.index()])
    }

    pub fn non00_mass(&self) -> Ratio {
        self.mass_on(Outcome::non00())
    }

    pub fn is_normalized(&self) -> bool {
        self.total().is_one()
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.weights.iter().any(Signed::is_negative)
    }

    /// Conditions on a non-00 outcome, yielding a `non00_12` distribution.
    pub fn condition_non00(&self) -> Result<Self> {
        let mass = self.non00_mass();
        if mass.is_zero() {
            return Err(Error::EmptySupport("no mass on non-00 outcomes".into()));
        }
        let weights = Outcome::all()
            .map(|o| if o.is_00() { Ratio::zero() } else { &self.weights[o.index()] / &mass })
            .collect();
        Self::new(weights, SupportMode::Non00)
    }

    /// Convex combination `Σ c_i · d_i`; all inputs must share a mode.
    pub fn mixture<'a>(terms: impl IntoIterator<Item = (Ratio, &'a OutcomeDistribution)>) -> Result<Self> {
        let mut weights = vec![Ratio::zero(); Outcome::COUNT];
        let mut mode = SupportMode::Non00;
        for (coeff, dist) in terms {
            if dist.mode == SupportMode::Full16 {
                mode = SupportMode::Full16;
            }
            for (acc, w) in weights.iter_mut().zip(&dist.weights) {
                *acc += &coeff * w;
            }
        }
        Self::new(weights, mode)
    }

    /// Nonzero entries keyed by canonical outcome name.
    pub fn to_named(&self) -> BTreeMap<String, String> {
        Outcome::all()
            .filter(|o| !self.weights[o.index()].is_zero())
            .map(|o| (o.name(), format_ratio(&self.weights[o.index()])))
            .collect()
    }
}

impl Serialize for OutcomeDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_named().serialize(s)
    }
}

impl<'de> Deserialize<'de> for OutcomeDistribution {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let named = BTreeMap::<String, String>::deserialize(d)?;
        let mut weights = vec![Ratio::zero(); Outcome::COUNT];
        for (name, value) in named {
            let o: Outcome = name.parse().map_err(serde::de::Error::custom)?;
            weights[o.index()] = parse_ratio(&value).map_err(serde::de::Error::custom)?;
        }
        let mode = if Outcome::all().any(|o| o.is_00() && !weights[o.index()].is_zero()) {
            SupportMode::Full16
        } else {
            SupportMode::Non00
        };
        OutcomeDistribution::new(weights, mode).map_err(serde::de::Error::custom)
    }
}
