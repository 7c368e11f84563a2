//! p-values and bounds for reduced walks: binomial tails for ±1 statistics,
//! the McDiarmid bound for `Ch`, the exact backward-induction DP over a local
//! adversary's candidate step laws, and the setting-bias correction.

mod analyze;
mod dp;
mod tails;

pub use analyze::{analyze, analyze_statistic, default_candidates, describe_statistic, Analysis, AnalysisOptions, Method};
pub use dp::{
    exact_pvalue_dp, exact_pvalue_dp_lattice, lattice_candidates, lattice_target, success_column, DpResult,
    LatticeCandidate, Policy, PolicyRow, Window,
};
pub use tails::{
    binomial_pvalue, binomial_upper_tail, epsilon_model, mcdiarmid_bound, normal_sigma, required_successes,
    EpsilonModel, Parity, TailProbability,
};
