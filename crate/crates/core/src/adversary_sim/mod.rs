//! Synthetic experiments and adversaries: i.i.d. trial streams from an outcome
//! distribution, replay of the DP-optimal adaptive local strategy, the best
//! memoryless strategy for comparison, and a Monte Carlo check that
//! history-dependent local sources keep the step drift nonpositive.
//!
//! Every run draws from its own ChaCha8 stream selected by run index, so
//! results are identical whatever the thread count.

mod adversary;
mod iid;
mod sampling;
mod verifier;

pub use adversary::{
    iid_tail, memoryless_best, simulate_adversary, wilson_interval, AdversaryReport, MemorylessBest, WilsonInterval,
    Z_99,
};
pub use iid::{simulate_iid, simulate_run, SimulationConfig};
pub use sampling::{outcome_sampler, run_rng, Categorical};
pub use verifier::{
    verify_derived_supermartingale, BucketCheck, MemorySequenceSpec, Trigger, VerifierConfig, VerifierReport,
};
