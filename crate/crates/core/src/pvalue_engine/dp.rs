use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::tails::TailProbability;
use crate::error::{Error, Result};
use crate::lhv_polytope::StepCandidateSet;
use crate::rational::{to_f64, Ratio};

const PAR_CHUNK: usize = 8192;

/// One candidate on the integer lattice: `(step, probability)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeCandidate {
    pub steps: Vec<(i64, f64)>,
    pub source: u8,
}

/// Converts exact candidates to lattice steps and float probabilities.
pub fn lattice_candidates(set: &StepCandidateSet) -> Result<Vec<LatticeCandidate>> {
    if set.is_empty() {
        return Err(Error::invalid("candidate set is empty"));
    }
    let scale = Ratio::from_integer(set.lattice_scale().clone());
    set.candidates
        .iter()
        .map(|c| {
            let steps = c
                .distribution
                .entries()
                .iter()
                .map(|(v, p)| {
                    let scaled = v * &scale;
                    if !scaled.is_integer() {
                        return Err(Error::invalid(format!("step {v} is off the lattice")));
                    }
                    let s = scaled.to_integer().to_i64().ok_or_else(|| Error::invalid("step too large"))?;
                    Ok((s, to_f64(p)))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(LatticeCandidate { steps, source: c.source() })
        })
        .collect()
}

/// Active window of one step: positions whose value is neither forced to 1
/// nor to 0 and which the walk can reach.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            (self.hi - self.lo + 1) as usize
        }
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Run-length encoded argmax choices of one step, over its window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolicyRow {
    pub window: Window,
    /// `(first position, candidate index)`, positions increasing.
    pub runs: Vec<(i64, u16)>,
}

impl PolicyRow {
    pub fn choice(&self, x: i64) -> Option<usize> {
        if !self.window.contains(x) {
            return None;
        }
        let i = self.runs.partition_point(|(start, _)| *start <= x);
        Some(self.runs[i - 1].1 as usize)
    }
}

/// Optimal adversary: the argmax candidate for each step and in-window position.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Policy {
    pub rows: Vec<PolicyRow>,
}

impl Policy {
    /// Candidate chosen before step `k + 1` at position `x`, or `None` if the
    /// walk is already decided there.
    pub fn choice(&self, k: u64, x: i64) -> Option<usize> {
        self.rows.get(k as usize).and_then(|r| r.choice(x))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DpResult {
    pub p_value: f64,
    pub ln_p_value: f64,
    /// Target on the lattice.
    pub l: i64,
    pub m: u64,
    pub u_up: i64,
    pub u_down: i64,
    pub candidates: Vec<LatticeCandidate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy: Option<Policy>,
}

impl DpResult {
    pub fn tail(&self) -> TailProbability {
        TailProbability { p_value: self.p_value, ln_p_value: self.ln_p_value }
    }

    pub fn window(&self, k: u64) -> Window {
        window(self.l, self.m, k, self.u_up, self.u_down)
    }

    /// Value of a position outside the window at step `k`: 1 above, 0 below.
    pub fn absorbed_value(&self, k: u64, x: i64) -> f64 {
        absorbed(self.l, self.m - k, self.u_down, x)
    }
}

fn window(l: i64, m: u64, k: u64, u_up: i64, u_down: i64) -> Window {
    let r = (m - k) as i64;
    let k = k as i64;
    Window {
        lo: (l - r * u_up).max(-k * u_down),
        hi: (l + r * u_down - 1).min(k * u_up),
    }
}

fn absorbed(l: i64, r: u64, u_down: i64, x: i64) -> f64 {
    if x >= l + r as i64 * u_down {
        1.0
    } else {
        0.0
    }
}

/// Supremum over adaptive local adversaries of `P(position after m steps ≥ l)`,
/// each step drawn from a candidate chosen with knowledge of the past.
///
/// Backward induction over two rolling rows restricted to the active window.
/// Ties go to the lowest candidate index. Every row is checked to be
/// nondecreasing in position.
pub fn exact_pvalue_dp(l: i64, m: u64, set: &StepCandidateSet, want_policy: bool) -> Result<DpResult> {
    let candidates = lattice_candidates(set)?;
    exact_pvalue_dp_lattice(l, m, candidates, want_policy)
}

/// [`exact_pvalue_dp`] with candidates already on the lattice.
pub fn exact_pvalue_dp_lattice(
    l: i64,
    m: u64,
    candidates: Vec<LatticeCandidate>,
    want_policy: bool,
) -> Result<DpResult> {
    if candidates.is_empty() {
        return Err(Error::invalid("candidate set is empty"));
    }
    if m == 0 {
        return Err(Error::invalid("m must be positive"));
    }
    if candidates.len() > u16::MAX as usize {
        return Err(Error::invalid("too many candidates"));
    }
    let all_steps = candidates.iter().flat_map(|c| c.steps.iter());
    let (u_up, u_down) = all_steps.fold((0i64, 0i64), |(up, down), &(s, _)| (up.max(s), down.max(-s)));

    let mut rows_rev: Vec<PolicyRow> = Vec::new();
    // Row for step k+1, over its window.
    let mut next: Vec<f64> = Vec::new();
    let mut next_w = window(l, m, m, u_up, u_down);
    let mut read: Vec<f64> = Vec::new();
    let mut cur: Vec<f64> = Vec::new();
    let mut choice: Vec<u16> = Vec::new();

    for k in (0..m).rev() {
        let w = window(l, m, k, u_up, u_down);
        if w.is_empty() {
            next.clear();
            next_w = w;
            if want_policy {
                rows_rev.push(PolicyRow { window: w, runs: Vec::new() });
            }
            continue;
        }
        // Values of step k+1 over [w.lo - u_down, w.hi + u_up].
        let read_lo = w.lo - u_down;
        let read_len = w.len() + (u_up + u_down) as usize;
        read.clear();
        read.extend((0..read_len as i64).map(|i| {
            let x = read_lo + i;
            if next_w.contains(x) {
                next[(x - next_w.lo) as usize]
            } else {
                absorbed(l, m - k - 1, u_down, x)
            }
        }));

        cur.clear();
        cur.resize(w.len(), 0.0);
        choice.clear();
        choice.resize(w.len(), 0);
        // Cells reading only exact zeros are zero for every candidate; skip them.
        let first_nonzero = read.partition_point(|&v| v == 0.0);
        let skip = first_nonzero.saturating_sub((u_up + u_down) as usize).min(w.len());
        let offsets: Vec<Vec<(usize, f64)>> = candidates
            .iter()
            .map(|c| c.steps.iter().map(|&(s, p)| ((s + u_down) as usize, p)).collect())
            .collect();
        let fill = |start: usize, best: &mut [f64], pick: &mut [u16]| {
            let mut tmp = vec![0.0f64; best.len()];
            for (ci, offs) in offsets.iter().enumerate() {
                tmp.iter_mut().for_each(|t| *t = 0.0);
                for &(off, p) in offs {
                    let src = &read[start + off..start + off + tmp.len()];
                    for (t, v) in tmp.iter_mut().zip(src) {
                        *t += p * v;
                    }
                }
                if ci == 0 {
                    best.copy_from_slice(&tmp);
                } else {
                    for ((b, c), t) in best.iter_mut().zip(pick.iter_mut()).zip(&tmp) {
                        if *t > *b {
                            *b = *t;
                            *c = ci as u16;
                        }
                    }
                }
            }
            // Subnormals are flushed: they cost far more than they are worth
            // and the total error this admits is below m * f64::MIN_POSITIVE.
            for b in best.iter_mut() {
                if *b < f64::MIN_POSITIVE {
                    *b = 0.0;
                }
            }
        };
        let (live, live_choice) = (&mut cur[skip..], &mut choice[skip..]);
        if live.len() > PAR_CHUNK {
            live.par_chunks_mut(PAR_CHUNK)
                .zip(live_choice.par_chunks_mut(PAR_CHUNK))
                .enumerate()
                .for_each(|(i, (b, c))| fill(skip + i * PAR_CHUNK, b, c));
        } else {
            fill(skip, live, live_choice);
        }

        if let Some(i) = cur.windows(2).position(|p| p[0] > p[1]) {
            return Err(Error::Invariant(format!(
                "success column not monotone at step {k}, position {}",
                w.lo + i as i64
            )));
        }
        if want_policy {
            let mut runs: Vec<(i64, u16)> = Vec::new();
            for (i, &c) in choice.iter().enumerate() {
                if runs.last().is_none_or(|&(_, last)| last != c) {
                    runs.push((w.lo + i as i64, c));
                }
            }
            rows_rev.push(PolicyRow { window: w, runs });
        }
        std::mem::swap(&mut next, &mut cur);
        next_w = w;
    }

    let w0 = window(l, m, 0, u_up, u_down);
    let p = if w0.contains(0) { next[(0 - w0.lo) as usize] } else { absorbed(l, m, u_down, 0) };
    let policy = want_policy.then(|| {
        rows_rev.reverse();
        Policy { rows: rows_rev }
    });
    Ok(DpResult {
        p_value: p,
        ln_p_value: p.ln(),
        l,
        m,
        u_up,
        u_down,
        candidates,
        policy,
    })
}

/// Optimal value and choice at each `position` with `remaining` steps to go
/// and target `l`, by re-running the DP with the origin shifted.
pub fn success_column(
    l: i64,
    remaining: u64,
    set: &StepCandidateSet,
    positions: impl IntoIterator<Item = i64>,
) -> Result<Vec<(i64, f64, Option<usize>)>> {
    positions
        .into_iter()
        .map(|x| {
            let r = exact_pvalue_dp(l - x, remaining, set, true)?;
            let pick = r.policy.as_ref().and_then(|p| p.choice(0, 0));
            Ok((x, r.p_value, pick))
        })
        .collect()
}

/// The target on the lattice for a statistic value.
pub fn lattice_target(value: &Ratio, set: &StepCandidateSet) -> Result<i64> {
    let scaled = value * Ratio::from_integer(set.lattice_scale().clone());
    if scaled.is_zero() {
        return Ok(0);
    }
    let ceil = scaled.ceil().to_integer();
    ceil.to_i64().ok_or_else(|| Error::invalid("target too large"))
}
