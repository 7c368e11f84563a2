use serde::Serialize;

use super::sampling::{outcome_sampler, run_rng};
use crate::error::{Error, Result};
use crate::trial_model::{trials_from_outcomes, OutcomeDistribution, TrialRecord};

#[derive(Debug, Clone, Serialize)]
pub struct SimulationConfig {
    pub distribution: OutcomeDistribution,
    pub n_trials: u64,
    pub runs: u64,
    pub seed: u64,
}

/// `n_trials` independent draws from the configured distribution for one
/// run. In `non00_12` mode every draw is a non-00 trial.
pub fn simulate_run(config: &SimulationConfig, run: u64) -> Result<Vec<TrialRecord>> {
    if !config.distribution.is_normalized() {
        return Err(Error::Data { index: 0, reason: "distribution does not sum to 1".into() });
    }
    let sampler = outcome_sampler(&config.distribution)?;
    let mut rng = run_rng(config.seed, run);
    Ok(trials_from_outcomes((0..config.n_trials).map(|_| sampler.sample(&mut rng))))
}

/// First run of the configuration.
pub fn simulate_iid(config: &SimulationConfig) -> Result<Vec<TrialRecord>> {
    simulate_run(config, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trial_model::{out, reduce_trials, BuiltinSpec, StepSpec};
    use crate::rational::int;

    #[test]
    fn point_mass_walk() {
        let cfg = SimulationConfig {
            distribution: OutcomeDistribution::point_mass(out("++ab")),
            n_trials: 5,
            runs: 1,
            seed: 1,
        };
        let walk = reduce_trials(&simulate_iid(&cfg).unwrap(), &StepSpec::builtin(BuiltinSpec::J)).unwrap();
        assert_eq!(walk.steps, vec![int(1); 5]);
    }

    #[test]
    fn seeded_streams_repeat() {
        let cfg = SimulationConfig {
            distribution: crate::reference_data::christensen_2013().unwrap(),
            n_trials: 2000,
            runs: 3,
            seed: 99,
        };
        assert_eq!(simulate_run(&cfg, 2).unwrap(), simulate_run(&cfg, 2).unwrap());
        assert_ne!(simulate_run(&cfg, 1).unwrap(), simulate_run(&cfg, 2).unwrap());
    }
}
