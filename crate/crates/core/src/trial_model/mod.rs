//! Trials, outcomes, distributions, and the reduction from a trial stream to
//! a supermartingale step sequence.

mod distribution;
mod outcome;
mod step_spec;
mod walk;

pub use distribution::{OutcomeDistribution, SupportMode, FLOAT_SUM_TOLERANCE};
pub use outcome::{out, Detection, Outcome, Setting1, Setting2};
pub use step_spec::{BuiltinSpec, StepSpec};
pub use walk::{
    empirical_distribution, reduce_trials, trials_from_outcomes, EmpiricalSummary, ReducedWalk, TrialRecord,
};
