use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::trial_model::{Outcome, OutcomeDistribution};

/// Generator for run `run` under `seed`. Each run owns a ChaCha8 stream, so
/// results do not depend on how runs are scheduled.
pub fn run_rng(seed: u64, run: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run);
    rng
}

/// Inverse-CDF sampler over a finite support.
#[derive(Debug, Clone)]
pub struct Categorical<T: Copy> {
    values: Vec<T>,
    cumulative: Vec<f64>,
}

impl<T: Copy> Categorical<T> {
    pub fn new(pairs: impl IntoIterator<Item = (T, f64)>) -> Result<Self> {
        let mut values = Vec::new();
        let mut cumulative = Vec::new();
        let mut acc = 0.0;
        for (v, p) in pairs {
            if p.is_nan() || p < 0.0 || !p.is_finite() {
                return Err(Error::invalid(format!("bad probability {p}")));
            }
            if p > 0.0 {
                acc += p;
                values.push(v);
                cumulative.push(acc);
            }
        }
        if values.is_empty() {
            return Err(Error::EmptySupport("distribution has no mass".into()));
        }
        for c in &mut cumulative {
            *c /= acc;
        }
        *cumulative.last_mut().unwrap() = 1.0;
        Ok(Self { values, cumulative })
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> T {
        let u: f64 = rng.random();
        let i = self.cumulative.partition_point(|&c| c <= u);
        self.values[i.min(self.values.len() - 1)]
    }
}

pub fn outcome_sampler(dist: &OutcomeDistribution) -> Result<Categorical<Outcome>> {
    if !dist.is_nonnegative() {
        return Err(Error::Data { index: 0, reason: "distribution has negative weights".into() });
    }
    Categorical::new(Outcome::all().zip(dist.probabilities_f64()))
}
