use num_traits::{Signed, Zero};
use serde::Serialize;

use super::strategy::{induced_equiprobable, strategy_distribution, DeterministicStrategy};
use crate::error::{Error, Result};
use crate::rational::{format_ratio, from_f64, half, int, to_f64, Ratio, FLOAT_ENTRY_DIGITS};
use crate::trial_model::{out, Outcome, OutcomeDistribution, SupportMode};

/// Equality tolerance for distributions that entered as printed decimals.
pub const FLOAT_EQUALITY_TOLERANCE: f64 = 1e-6;

/// Linear form over outcomes: `Σ coeff · p(outcome)`.
#[derive(Debug, Clone)]
pub struct LinearForm(Vec<(Outcome, i64)>);

impl LinearForm {
    fn parse(terms: &[(&str, i64)]) -> Self {
        LinearForm(terms.iter().map(|&(n, c)| (out(n), c)).collect())
    }

    pub fn terms(&self) -> &[(Outcome, i64)] {
        &self.0
    }

    pub fn evaluate(&self, dist: &OutcomeDistribution) -> Ratio {
        self.0
            .iter()
            .fold(Ratio::zero(), |acc, (o, c)| acc + int(*c) * dist.weight(*o))
    }

    /// Coefficient vector in canonical outcome order.
    pub fn dense(&self) -> [i64; 16] {
        let mut v = [0; 16];
        for (o, c) in &self.0 {
            v[o.index()] += c;
        }
        v
    }
}

/// The four no-signaling equalities, each written as left minus right.
pub fn no_signaling_forms() -> [LinearForm; 4] {
    [
        LinearForm::parse(&[("++ab", 1), ("+0ab", 1), ("++ab'", -1), ("+0ab'", -1)]),
        LinearForm::parse(&[("++a'b", 1), ("+0a'b", 1), ("++a'b'", -1), ("+0a'b'", -1)]),
        LinearForm::parse(&[("++ab", 1), ("0+ab", 1), ("++a'b", -1), ("0+a'b", -1)]),
        LinearForm::parse(&[("++ab'", 1), ("0+ab'", 1), ("++a'b'", -1), ("0+a'b'", -1)]),
    ]
}

/// The four Eberhard-type inequalities (`form ≤ 0`).
pub fn eberhard_forms() -> [LinearForm; 4] {
    [
        LinearForm::parse(&[("++ab", 1), ("+0ab'", -1), ("0+a'b", -1), ("++a'b'", -1)]),
        LinearForm::parse(&[("++ab'", 1), ("+0ab", -1), ("0+a'b'", -1), ("++a'b", -1)]),
        LinearForm::parse(&[("++a'b", 1), ("+0a'b'", -1), ("0+ab", -1), ("++ab'", -1)]),
        LinearForm::parse(&[("++a'b'", 1), ("+0a'b", -1), ("0+ab'", -1), ("++ab", -1)]),
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstraintReport {
    pub normalization_ok: bool,
    pub nonnegativity_ok: bool,
    #[serde(serialize_with = "ser_ratios")]
    pub equality_residuals: [Ratio; 4],
    #[serde(serialize_with = "ser_ratios")]
    pub inequality_slacks: [Ratio; 4],
    pub tolerance: f64,
    pub is_local_boundary_consistent: bool,
}

fn ser_ratios<S: serde::Serializer>(values: &[Ratio; 4], s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry {
        exact: String,
        value: f64,
    }
    let entries: Vec<Entry> = values
        .iter()
        .map(|r| Entry { exact: format_ratio(r), value: to_f64(r) })
        .collect();
    entries.serialize(s)
}

/// Evaluates the constraint list exactly; the verdict requires exact equalities.
pub fn check_constraints(dist: &OutcomeDistribution) -> ConstraintReport {
    check_constraints_with_tolerance(dist, 0.0)
}

/// As [`check_constraints`], but the verdict allows `|residual| ≤ tolerance`
/// and `slack ≤ tolerance`. Residuals themselves are still exact.
pub fn check_constraints_with_tolerance(dist: &OutcomeDistribution, tolerance: f64) -> ConstraintReport {
    let equality_residuals = no_signaling_forms().map(|f| f.evaluate(dist));
    let inequality_slacks = eberhard_forms().map(|f| f.evaluate(dist));
    let tol = from_f64(tolerance, FLOAT_ENTRY_DIGITS).unwrap_or_else(|_| Ratio::zero());
    let normalization_ok = dist.is_normalized();
    let nonnegativity_ok = dist.is_nonnegative();
    let zero_on_00 = Outcome::all().filter(|o| o.is_00()).all(|o| dist.weight(o).is_zero());
    let is_local_boundary_consistent = normalization_ok
        && nonnegativity_ok
        && zero_on_00
        && equality_residuals.iter().all(|r| r.abs() <= tol)
        && inequality_slacks.iter().all(|s| s <= &tol);
    ConstraintReport {
        normalization_ok,
        nonnegativity_ok,
        equality_residuals,
        inequality_slacks,
        tolerance,
        is_local_boundary_consistent,
    }
}

fn convex_weights(weights: &[Ratio]) -> Result<&[Ratio]> {
    match weights.len() {
        15 => {}
        16 if weights[15].is_zero() => {}
        16 => return Err(Error::invalid("strategy v16 induces no non-00 distribution and cannot carry weight")),
        n => return Err(Error::invalid(format!("expected 15 strategy weights, got {n}"))),
    }
    if weights.iter().any(Signed::is_negative) {
        return Err(Error::invalid("negative strategy weight"));
    }
    let total = weights.iter().fold(Ratio::zero(), |a, w| a + w);
    if total != int(1) {
        return Err(Error::invalid(format!("strategy weights sum to {}", format_ratio(&total))));
    }
    Ok(&weights[..15])
}

/// `Σ d_k · v_k**` over the fifteen clicking strategies (equiprobable settings).
pub fn random_local_mixture(weights: &[Ratio]) -> Result<OutcomeDistribution> {
    let d = convex_weights(weights)?;
    let induced = DeterministicStrategy::clicking()
        .map(|v| induced_equiprobable(&v))
        .collect::<Result<Vec<_>>>()?;
    OutcomeDistribution::mixture(d.iter().cloned().zip(induced.iter()))
}

/// An i.i.d. per-trial distribution whose non-00 conditional equals a given
/// mixture of induced strategies.
#[derive(Debug, Clone, Serialize)]
pub struct FineConstruction {
    pub distribution: OutcomeDistribution,
    #[serde(with = "crate::rational::serde_ratio")]
    pub x: Ratio,
    #[serde(with = "crate::rational::serde_ratio")]
    pub y: Ratio,
    #[serde(with = "crate::rational::serde_ratio")]
    pub z: Ratio,
    #[serde(with = "crate::rational::serde_ratio")]
    pub s: Ratio,
    #[serde(with = "crate::rational::serde_ratio")]
    pub t: Ratio,
    #[serde(with = "crate::rational::serde_ratio")]
    pub u: Ratio,
    /// Per-trial probability of a 00 outcome.
    #[serde(with = "crate::rational::serde_ratio")]
    pub zero_mass: Ratio,
}

pub fn fine_construct(weights: &[Ratio]) -> Result<FineConstruction> {
    let d = convex_weights(weights)?;
    let sum = |r: std::ops::Range<usize>| d[r].iter().fold(Ratio::zero(), |a, w| a + w);
    let (x, y, z) = (sum(0..7), sum(7..11), sum(11..15));
    let denom = int(3) * &x + int(4) * &y + int(6) * &z;
    let (s, t, u) = (int(3) / &denom, int(4) / &denom, int(6) / &denom);
    let full = DeterministicStrategy::clicking()
        .map(|v| strategy_distribution(&v, &half(), &half()))
        .collect::<Result<Vec<_>>>()?;
    let coeffs = d.iter().enumerate().map(|(k, dk)| {
        let group = match k {
            0..=6 => &s,
            7..=10 => &t,
            _ => &u,
        };
        dk * group
    });
    let distribution = OutcomeDistribution::mixture(coeffs.zip(full.iter()))?;
    let zero_mass = distribution.mass_on(Outcome::all().filter(|o| o.is_00()));
    debug_assert_eq!(distribution.mode(), SupportMode::Full16);
    Ok(FineConstruction { distribution, x, y, z, s, t, u, zero_mass })
}
