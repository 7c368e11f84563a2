//! Feeds a history-dependent local source through the step map and checks,
//! bucket by bucket of recent history, that the conditional mean step stays
//! at or below zero. A signaling source is included for contrast.
use std::collections::BTreeMap;

use chcert::adversary_sim::{verify_derived_supermartingale, MemorySequenceSpec, Trigger, VerifierConfig};
use chcert::lhv_polytope::{induced_non00_distribution, DeterministicStrategy};
use chcert::rational::{half, ratio};
use chcert::trial_model::{out, BuiltinSpec, OutcomeDistribution, StepSpec, SupportMode};

fn strategy(k: u8) -> OutcomeDistribution {
    induced_non00_distribution(&DeterministicStrategy::get(k).unwrap(), &half(), &half()).unwrap()
}

fn main() -> chcert::Result<()> {
    let spec = StepSpec::builtin(BuiltinSpec::Ch);
    let cfg = VerifierConfig { runs: 10_000, trials_per_run: 40, max_depth: 6, seed: 3, ..Default::default() };

    let local = MemorySequenceSpec::new(vec![
        (Trigger::LastStepPositive, strategy(9)),
        (Trigger::LastStepNegative, strategy(3)),
        (Trigger::Always, strategy(1)),
    ])?;
    let report = verify_derived_supermartingale(&local, &spec, &cfg)?;
    println!(
        "local: {} buckets, max z {:.2} (threshold {:.2}), passed {}",
        report.buckets_examined,
        report.max_z,
        report.threshold_sigmas,
        report.passed()
    );

    let mut table = BTreeMap::new();
    table.insert(out("++ab'"), ratio(3, 5));
    table.insert(out("+0ab"), ratio(2, 5));
    let signaling = OutcomeDistribution::from_map(&table, SupportMode::Non00)?;
    let bad = MemorySequenceSpec::new_unchecked(vec![(Trigger::Always, signaling)])?;
    let report = verify_derived_supermartingale(&bad, &spec, &cfg)?;
    println!("signaling: {} flagged buckets, passed {}", report.violations.len(), report.passed());
    Ok(())
}
