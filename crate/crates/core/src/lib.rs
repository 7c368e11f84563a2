//! Memory-robust p-values for Clauser-Horne Bell-test data.
//!
//! A trial stream is reduced to a walk whose increments form a supermartingale
//! under every local hidden variable model, even one that adapts to earlier
//! results. The crate then assigns a p-value to the walk's final position:
//!
//! - binary statistics (`J`, `J_E2`, `J_E3`) use an exact binomial tail;
//! - non-binary statistics (`Ch`, generalized `J`) use exact backward
//!   induction over the local adversary's choices, or a McDiarmid bound.
//!
//! The [`lhv_polytope`] module derives the adversary's admissible step
//! distributions from the sixteen deterministic strategies, and
//! [`adversary_sim`] replays optimal adversaries and synthetic experiments.
//! Runnable walkthroughs live in `examples/`.

pub mod adversary_sim;
pub mod error;
pub mod io_cli;
pub mod lhv_polytope;
pub mod pvalue_engine;
pub mod rational;
pub mod reference_data;
pub mod trial_model;

pub use error::{Error, Result};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
