//! The local-hidden-variable model: deterministic strategies, the distributions
//! they induce, the eight-constraint characterization of their hull, the
//! i.i.d. realization of any hull point, and the per-step candidate laws the
//! exact p-value DP maximizes over.

mod candidates;
mod constraints;
mod strategy;

pub use candidates::{step_candidates, StepCandidate, StepCandidateSet, StepDistribution};
pub use constraints::{
    check_constraints, check_constraints_with_tolerance, eberhard_forms, fine_construct, no_signaling_forms,
    random_local_mixture, ConstraintReport, FineConstruction, LinearForm, FLOAT_EQUALITY_TOLERANCE,
};
pub use strategy::{induced_non00_distribution, strategy_distribution, DeterministicStrategy};
