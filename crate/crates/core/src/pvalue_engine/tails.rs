use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// A probability with its natural log, so values below `f64::MIN_POSITIVE`
/// still carry information.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailProbability {
    pub p_value: f64,
    pub ln_p_value: f64,
}

impl TailProbability {
    pub fn from_ln(ln_p: f64) -> Self {
        Self { p_value: ln_p.exp(), ln_p_value: ln_p }
    }

    pub fn from_linear(p: f64) -> Self {
        Self { p_value: p, ln_p_value: p.ln() }
    }
}

/// How `#(+1)` is recovered from `(J, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    /// `m + J` must be even.
    #[default]
    Strict,
    /// Accept odd `m + J`, using `⌈(m + J)/2⌉`.
    Lenient,
}

/// Number of +1 steps needed for a ±1 walk of length `m` to reach `j_obs`.
pub fn required_successes(j_obs: i64, m: u64, parity: Parity) -> Result<u64> {
    let m_i = i64::try_from(m).map_err(|_| Error::invalid("m too large"))?;
    if j_obs.abs() > m_i {
        return Err(Error::invalid(format!("|J| = {} exceeds m = {m}", j_obs.abs())));
    }
    let sum = m_i + j_obs;
    if sum % 2 != 0 && parity == Parity::Strict {
        return Err(Error::invalid(format!(
            "J = {j_obs} and m = {m} have different parity; no ±1 walk produces them"
        )));
    }
    Ok(((sum + 1) / 2) as u64)
}

fn ln_choose(n: u64, k: u64) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// `ln P(X = k)` for `X ~ Binomial(n, p)`, `0 < p < 1`.
fn ln_pmf(n: u64, k: u64, p: f64) -> f64 {
    ln_choose(n, k) + k as f64 * p.ln() + (n - k) as f64 * (-p).ln_1p()
}

/// Sums pmf terms walking away from the mode, starting at `start`. Returns
/// `ln Σ`. Terms shrink monotonically, so the ratio recurrence never overflows.
fn ln_tail_from(n: u64, start: u64, p: f64, upward: bool) -> f64 {
    let ln_first = ln_pmf(n, start, p);
    let odds = p / (1.0 - p);
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut k = start;
    loop {
        if upward {
            if k == n {
                break;
            }
            term *= (n - k) as f64 / (k + 1) as f64 * odds;
            k += 1;
        } else {
            if k == 0 {
                break;
            }
            term *= k as f64 / (n - k + 1) as f64 / odds;
            k -= 1;
        }
        sum += term;
        if term < sum * 1e-18 {
            break;
        }
    }
    ln_first + sum.ln()
}

/// `P(X ≥ k)` for `X ~ Binomial(n, p)`.
pub fn binomial_upper_tail(k: u64, n: u64, p: f64) -> Result<TailProbability> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::domain(format!("p0 = {p} is not a probability")));
    }
    if k == 0 {
        return Ok(TailProbability { p_value: 1.0, ln_p_value: 0.0 });
    }
    if k > n || p == 0.0 {
        return Ok(TailProbability { p_value: 0.0, ln_p_value: f64::NEG_INFINITY });
    }
    if p == 1.0 {
        return Ok(TailProbability { p_value: 1.0, ln_p_value: 0.0 });
    }
    if k as f64 > n as f64 * p {
        Ok(TailProbability::from_ln(ln_tail_from(n, k, p, true)))
    } else {
        let lower = ln_tail_from(n, k - 1, p, false).exp().min(1.0);
        let ln_p = (-lower).ln_1p();
        Ok(TailProbability { p_value: 1.0 - lower, ln_p_value: ln_p })
    }
}

/// One-sided p-value of a ±1 walk ending at `j_obs` after `m` steps when each
/// step is +1 with probability at most `p0`.
pub fn binomial_pvalue(j_obs: i64, m: u64, p0: f64, parity: Parity) -> Result<TailProbability> {
    if m == 0 {
        return Err(Error::invalid("m must be positive"));
    }
    let k0 = required_successes(j_obs, m, parity)?;
    binomial_upper_tail(k0, m, p0)
}

/// Normal-approximation distance of `J` from its null mean, in standard deviations.
pub fn normal_sigma(j_obs: i64, m: u64, p0: f64) -> f64 {
    let m = m as f64;
    (j_obs as f64 - m * (2.0 * p0 - 1.0)) / (2.0 * (m * p0 * (1.0 - p0)).sqrt())
}

/// Upper bound on `P(Ch_m ≥ L)` for a walk with steps in {+1, -1, -2} and
/// nonpositive drift. Requires `0 < L/m < 1`.
pub fn mcdiarmid_bound(l: i64, m: u64) -> Result<TailProbability> {
    if m == 0 {
        return Err(Error::domain("m must be positive"));
    }
    let t = l as f64 / m as f64;
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::domain(format!("L/m = {t} is outside (0, 1)")));
    }
    let per_step = (2.0 + t) / 3.0 * (2.0 / (2.0 + t)).ln() - (1.0 - t) / 3.0 * (-t).ln_1p();
    Ok(TailProbability::from_ln(m as f64 * per_step))
}

/// Setting-bias correction for binary statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsilonModel {
    pub epsilon: f64,
    /// Largest possible `E(J_k)` when each setting probability is within ε of 1/2.
    pub mean_bound: f64,
    /// The matching bound on `P(J_k = +1)`.
    pub adjusted_p0: f64,
}

pub fn epsilon_model(epsilon: f64) -> Result<EpsilonModel> {
    if !(0.0..0.5).contains(&epsilon) {
        return Err(Error::domain(format!("epsilon = {epsilon} is outside [0, 1/2)")));
    }
    let denom = 1.0 + 4.0 * epsilon * epsilon;
    Ok(EpsilonModel {
        epsilon,
        mean_bound: 4.0 * epsilon / denom,
        adjusted_p0: 0.5 + 2.0 * epsilon / denom,
    })
}
