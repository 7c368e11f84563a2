//! Trial files, JSON inputs, reports, and the `chcert` command line.
//!
//! ```text
//! chcert analyze trials.csv --spec Ch --method exact-dp
//! chcert pvalue --spec Ch --method exact-dp --L 1135 --m 20395
//! chcert bound --L 4258 --m 131116
//! chcert simulate --dist giustina.json --n 100000 --seed 7 --runs 3 --normalize
//! chcert polytope --check dist.json | --strategies | --fine weights.json
//! chcert policy --spec Ch --L 447 --m 19359 --out policy.json --simulate 10000
//! ```
//!
//! Exit codes: 0 success, 1 usage, 2 data, 3 invalid or incompatible parameters.

mod cli;
mod json_input;
mod report;
mod trials_csv;

pub use cli::{cli_dispatch, exit_code, EXIT_DATA, EXIT_OK, EXIT_PARAMETERS, EXIT_USAGE};
pub use json_input::{parse_distribution_json, parse_weights_json};
pub use report::{
    finite, suggest_epsilon, suggest_epsilon_from_deviation, timestamp, AnalysisReport, Envelope, SettingMarginals,
    MARGINAL_WARNING_SIGMAS,
};
pub use trials_csv::{parse_trials, parse_trials_path, write_trials, TrialFormat, CSV_HEADER};
