use rayon::prelude::*;
use serde::Serialize;

use super::sampling::{run_rng, Categorical};
use crate::error::{Error, Result};
use crate::pvalue_engine::{DpResult, LatticeCandidate};

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_901;

const BLOCK: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WilsonInterval {
    pub lower: f64,
    pub upper: f64,
}

impl WilsonInterval {
    pub fn contains(&self, p: f64) -> bool {
        self.lower <= p && p <= self.upper
    }
}

pub fn wilson_interval(successes: u64, n: u64, z: f64) -> WilsonInterval {
    if n == 0 {
        return WilsonInterval { lower: 0.0, upper: 1.0 };
    }
    let n_f = n as f64;
    let p = successes as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let centre = (p + z2 / (2.0 * n_f)) / denom;
    let half = z * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    WilsonInterval { lower: (centre - half).max(0.0), upper: (centre + half).min(1.0) }
}

#[derive(Debug, Clone, Serialize)]
pub struct AdversaryReport {
    pub l: i64,
    pub m: u64,
    pub runs: u64,
    pub seed: u64,
    pub successes: u64,
    pub frequency: f64,
    pub interval: WilsonInterval,
    /// Value the DP assigns to the same game.
    pub dp_value: f64,
}

/// Plays the DP's optimal policy `runs` times and counts walks ending at or
/// above `l`. A run stops as soon as its position leaves the active window,
/// since the outcome is then fixed.
pub fn simulate_adversary(dp: &DpResult, l: i64, m: u64, runs: u64, seed: u64) -> Result<AdversaryReport> {
    let policy = dp
        .policy
        .as_ref()
        .ok_or_else(|| Error::invalid("DP result carries no policy"))?;
    if dp.l != l || dp.m != m || policy.rows.len() as u64 != m {
        return Err(Error::invalid(format!(
            "policy was computed for L={}, m={}, not L={l}, m={m}",
            dp.l, dp.m
        )));
    }
    for (k, row) in policy.rows.iter().enumerate() {
        if row.window != dp.window(k as u64) || (!row.window.is_empty() && row.runs.first().map(|r| r.0) != Some(row.window.lo)) {
            return Err(Error::invalid(format!("policy row {k} does not cover its window")));
        }
        if row.runs.iter().any(|&(_, c)| c as usize >= dp.candidates.len()) {
            return Err(Error::invalid(format!("policy row {k} names an unknown candidate")));
        }
    }
    let samplers = candidate_samplers(&dp.candidates)?;
    // Runs advance in lockstep within a block so each policy row is read once
    // per block rather than once per run.
    let blocks: Vec<(u64, u64)> = (0..runs)
        .step_by(BLOCK)
        .map(|start| (start, (start + BLOCK as u64).min(runs)))
        .collect();
    let successes: u64 = blocks
        .into_par_iter()
        .map(|(start, end)| {
            let mut rngs: Vec<_> = (start..end).map(|run| run_rng(seed, run)).collect();
            let mut live: Vec<usize> = (0..rngs.len()).collect();
            let mut x = vec![0i64; rngs.len()];
            let mut wins = 0u64;
            for (k, row) in policy.rows.iter().enumerate() {
                live.retain(|&i| match row.choice(x[i]) {
                    Some(c) => {
                        x[i] += samplers[c].sample(&mut rngs[i]);
                        true
                    }
                    None => {
                        wins += dp.absorbed_value(k as u64, x[i]) as u64;
                        false
                    }
                });
                if live.is_empty() {
                    break;
                }
            }
            wins + live.iter().filter(|&&i| x[i] >= l).count() as u64
        })
        .sum();
    Ok(AdversaryReport {
        l,
        m,
        runs,
        seed,
        successes,
        frequency: successes as f64 / runs.max(1) as f64,
        interval: wilson_interval(successes, runs, Z_99),
        dp_value: dp.p_value,
    })
}

fn candidate_samplers(candidates: &[LatticeCandidate]) -> Result<Vec<Categorical<i64>>> {
    candidates.iter().map(|c| Categorical::new(c.steps.iter().copied())).collect()
}

/// `P(S_m ≥ l)` for an i.i.d. walk with the given lattice step law, by
/// forward convolution.
pub fn iid_tail(steps: &[(i64, f64)], l: i64, m: u64) -> f64 {
    let u_up = steps.iter().map(|s| s.0).max().unwrap_or(0).max(0);
    let u_down = steps.iter().map(|s| -s.0).max().unwrap_or(0).max(0);
    let m_i = m as i64;
    let lo = -m_i * u_down;
    let width = (m_i * (u_up + u_down) + 1) as usize;
    let mut dist = vec![0.0f64; width];
    let mut next = vec![0.0f64; width];
    dist[(-lo) as usize] = 1.0;
    for _ in 0..m {
        next.iter_mut().for_each(|v| *v = 0.0);
        for (i, &p) in dist.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for &(s, q) in steps {
                let j = i as i64 + s;
                if (0..width as i64).contains(&j) {
                    next[j as usize] += p * q;
                }
            }
        }
        std::mem::swap(&mut dist, &mut next);
    }
    let start = (l - lo).max(0);
    dist.iter().skip(start as usize).sum()
}

fn mix(a: &LatticeCandidate, b: &LatticeCandidate, q: f64) -> Vec<(i64, f64)> {
    let mut out: Vec<(i64, f64)> = Vec::new();
    for &(s, p) in &a.steps {
        out.push((s, q * p));
    }
    for &(s, p) in &b.steps {
        match out.iter_mut().find(|e| e.0 == s) {
            Some(e) => e.1 += (1.0 - q) * p,
            None => out.push((s, (1.0 - q) * p)),
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct MemorylessBest {
    pub value: f64,
    pub first: usize,
    pub second: usize,
    /// Weight on `first`.
    pub q: f64,
}

/// Best i.i.d. adversary restricted to one candidate or a mixture of two.
///
/// Each pair is scanned on a `1e-3` grid in `q`, then the best grid point is
/// refined by golden-section search on its neighbouring interval.
pub fn memoryless_best(candidates: &[LatticeCandidate], l: i64, m: u64) -> Result<MemorylessBest> {
    if candidates.is_empty() {
        return Err(Error::invalid("candidate set is empty"));
    }
    let mut best = MemorylessBest { value: f64::NEG_INFINITY, first: 0, second: 0, q: 1.0 };
    let mut consider = |value: f64, first: usize, second: usize, q: f64| {
        if value > best.value {
            best = MemorylessBest { value, first, second, q };
        }
    };
    for (i, c) in candidates.iter().enumerate() {
        consider(iid_tail(&c.steps, l, m), i, i, 1.0);
    }
    const GRID: usize = 1000;
    for i in 0..candidates.len() {
        for j in i + 1..candidates.len() {
            let f = |q: f64| iid_tail(&mix(&candidates[i], &candidates[j], q), l, m);
            let (mut arg, mut top) = (0usize, f64::NEG_INFINITY);
            for g in 0..=GRID {
                let v = f(g as f64 / GRID as f64);
                if v > top {
                    top = v;
                    arg = g;
                }
            }
            consider(top, i, j, arg as f64 / GRID as f64);
            let lo = arg.saturating_sub(1) as f64 / GRID as f64;
            let hi = (arg + 1).min(GRID) as f64 / GRID as f64;
            let q = golden_max(&f, lo, hi, 60);
            consider(f(q), i, j, q);
        }
    }
    Ok(best)
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, iterations: usize) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iterations {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}
