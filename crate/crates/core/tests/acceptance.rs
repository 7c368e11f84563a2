//! Acceptance criteria. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line.

mod common;

use std::time::{Duration, Instant};

use chcert::adversary_sim::{
    memoryless_best, simulate_adversary, simulate_iid, verify_derived_supermartingale, MemorySequenceSpec,
    SimulationConfig, Trigger, VerifierConfig,
};
use chcert::lhv_polytope::{
    check_constraints, fine_construct, induced_non00_distribution, no_signaling_forms, random_local_mixture,
    step_candidates,
    DeterministicStrategy, StepCandidateSet, StepDistribution,
};
use chcert::pvalue_engine::{
    binomial_pvalue, epsilon_model, exact_pvalue_dp, lattice_candidates, mcdiarmid_bound, normal_sigma,
    success_column, Parity,
};
use chcert::rational::{half, int, ratio, Ratio};
use chcert::reference_data::{giustina_2013, giustina_2013_printed};
use chcert::trial_model::{out, reduce_trials, BuiltinSpec, Outcome, OutcomeDistribution, StepSpec, SupportMode};
use common::{ch_all_vertex_laws, ch_saturating, feasible, game_tree_value, iid_tail_exact, mix_laws, q, q_to_f64, Q};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type CheckResult = Result<String, String>;
type Criterion = (&'static str, fn() -> CheckResult);

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ch_set() -> StepCandidateSet {
    step_candidates(&StepSpec::builtin(BuiltinSpec::Ch), &half(), &half()).unwrap()
}

fn law(pairs: &[(i64, Ratio)]) -> StepDistribution {
    StepDistribution::new(pairs.iter().map(|(v, p)| (int(*v), p.clone()))).unwrap()
}

fn backward_columns() -> CheckResult {
    let set = ch_set();
    let fair = set.find(&law(&[(1, half()), (-1, half())])).ok_or("fair coin missing")?;
    let biased = set.find(&law(&[(1, ratio(2, 3)), (-2, ratio(1, 3))])).ok_or("2/3 law missing")?;
    // (offset from L, value, expected choice) with None for "any".
    let one_left: [(i64, f64, Option<usize>); 7] = [
        (3, 1.0, None),
        (2, 1.0, None),
        (1, 1.0, Some(fair)),
        (0, 2.0 / 3.0, Some(biased)),
        (-1, 2.0 / 3.0, Some(biased)),
        (-2, 0.0, None),
        (-3, 0.0, None),
    ];
    let two_left: [(i64, f64, Option<usize>); 7] = [
        (3, 1.0, None),
        (2, 1.0, Some(fair)),
        (1, 8.0 / 9.0, Some(biased)),
        (0, 5.0 / 6.0, Some(fair)),
        (-1, 4.0 / 9.0, Some(biased)),
        (-2, 4.0 / 9.0, Some(biased)),
        (-3, 0.0, None),
    ];
    let target = 100;
    for (remaining, rows) in [(1u64, &one_left), (2, &two_left)] {
        let got = success_column(target, remaining, &set, rows.iter().map(|r| target + r.0)).map_err(|e| e.to_string())?;
        for ((x, value, pick), (offset, want, want_pick)) in got.iter().zip(rows.iter()) {
            ensure((value - want).abs() <= 1e-12, format!("m-{remaining}, L{offset:+}: {value} vs {want}"))?;
            if let Some(p) = want_pick {
                ensure(pick == &Some(*p), format!("m-{remaining}, L{offset:+} (x={x}): choice {pick:?} vs {p}"))?;
            }
        }
    }
    Ok("values 2/3, 1, 5/6, 8/9, 4/9 and the expected fair/biased choices".into())
}

fn exact_ch() -> CheckResult {
    let set = ch_set().undominated();
    let t = Instant::now();
    let a = exact_pvalue_dp(1135, 20395, &set, false).map_err(|e| e.to_string())?.p_value;
    let ta = t.elapsed();
    let t = Instant::now();
    let b = exact_pvalue_dp(447, 19359, &set, false).map_err(|e| e.to_string())?.p_value;
    let tb = t.elapsed();
    ensure(rel(a, 9.90e-9) <= 0.02, format!("(1135, 20395) gave {a:e}"))?;
    ensure((b - 0.0136).abs() <= 0.0005, format!("(447, 19359) gave {b}"))?;
    ensure(ta < Duration::from_secs(60) && tb < Duration::from_secs(60), "runtime over 60 s")?;
    Ok(format!("{a:.4e} in {ta:.1?}; {b:.6} in {tb:.1?}"))
}

fn mcdiarmid() -> CheckResult {
    let mut parts = Vec::new();
    for (l, m, want) in [(4258, 131116, 8.0e-16), (1135, 20395, 1.19e-7), (447, 19359, 0.0750)] {
        let got = mcdiarmid_bound(l, m).map_err(|e| e.to_string())?.p_value;
        ensure(rel(got, want) <= 0.05, format!("({l}, {m}) gave {got:e}, want {want:e}"))?;
        parts.push(format!("{got:.3e}"));
    }
    Ok(parts.join(", "))
}

fn binomial_normal() -> CheckResult {
    let sigma = normal_sigma(126715, 2011897, 0.5);
    ensure((sigma - 89.3).abs() <= 0.5, format!("sigma {sigma}"))?;
    let rows = [
        (591, 9380, 5.17e-10),
        (573, 10175, 7.06e-9),
        (562, 10545, 2.20e-8),
        (206, 8624, 0.0136),
        (202, 9696, 0.0206),
        (245, 9937, 0.0072),
    ];
    let mut worst = 0.0f64;
    for (j, m, want) in rows {
        let got = binomial_pvalue(j, m, 0.5, Parity::Lenient).map_err(|e| e.to_string())?.p_value;
        worst = worst.max(rel(got, want));
        ensure(rel(got, want) <= 0.20, format!("{j}/{m} gave {got:e}, want {want:e}"))?;
    }
    Ok(format!("sigma {sigma:.2}; worst relative error over six rows {worst:.3}"))
}

fn setting_bias() -> CheckResult {
    let p0 = epsilon_model(0.006).map_err(|e| e.to_string())?.adjusted_p0;
    ensure(format!("{p0:.3}") == "0.512", format!("adjusted p0 {p0}"))?;
    let p = binomial_pvalue(2414, 65876, 0.512, Parity::Strict).map_err(|e| e.to_string())?.p_value;
    ensure(rel(p, 0.00058) <= 0.10, format!("p {p}"))?;
    Ok(format!("p0 {p0:.6}, p {p:.3e}"))
}

fn binary_collapse() -> CheckResult {
    let set = step_candidates(&StepSpec::builtin(BuiltinSpec::J), &half(), &half()).unwrap();
    let mut worst = 0.0f64;
    for m in 1..=64u32 {
        for l in 1..=m as i64 {
            let dp = exact_pvalue_dp(l, m as u64, &set, false).map_err(|e| e.to_string())?.p_value;
            // S = 2X - m ≥ l  ⇔  X ≥ ⌈(m + l)/2⌉
            let k = (m as i64 + l + 1) / 2;
            let exact = q_to_f64(&common::binomial_half_tail(k, m));
            worst = worst.max((dp - exact).abs());
        }
    }
    ensure(worst <= 1e-12, format!("max deviation {worst:e}"))?;
    Ok(format!("2080 (L, m) pairs, max deviation {worst:.1e}"))
}

fn brute_force() -> CheckResult {
    let set = ch_set();
    let sat = ch_saturating();
    let all = ch_all_vertex_laws();
    let mut cells = 0;
    for m in 1..=8u32 {
        for l in -2 * m as i64..=m as i64 {
            let dp = exact_pvalue_dp(l, m as u64, &set, false).map_err(|e| e.to_string())?.p_value;
            let tree = game_tree_value(&sat, l, m, 0);
            ensure((dp - q_to_f64(&tree)).abs() <= 1e-15, format!("m={m} L={l}: {dp} vs {tree}"))?;
            if m <= 5 {
                let full = game_tree_value(&all, l, m, 0);
                ensure(full == tree, format!("m={m} L={l}: full tree {full} vs saturating {tree}"))?;
            }
            cells += 1;
        }
    }
    Ok(format!("{cells} (L, m) cells agree with the exhaustive rational game tree"))
}

fn memory_gap() -> CheckResult {
    let laws = ch_all_vertex_laws();
    let adaptive = game_tree_value(&laws, 0, 2, 0);
    ensure(adaptive == q(5, 6), format!("adaptive {adaptive}"))?;
    let mut best_iid = Q::zero();
    for i in 0..laws.len() {
        for j in i..laws.len() {
            for g in 0..=1000 {
                let w = q(g, 1000);
                let v = iid_tail_exact(&mix_laws(&laws[i], &laws[j], &w), 0, 2);
                if v > best_iid {
                    best_iid = v;
                }
            }
        }
    }
    ensure(best_iid == q(3, 4), format!("best i.i.d. {best_iid}"))?;
    ensure(best_iid < adaptive, "no gap")?;
    let set = ch_set();
    let dp = exact_pvalue_dp(0, 2, &set, false).map_err(|e| e.to_string())?.p_value;
    let memoryless = memoryless_best(&lattice_candidates(&set).unwrap(), 0, 2).map_err(|e| e.to_string())?.value;
    ensure((dp - 5.0 / 6.0).abs() <= 1e-15, format!("engine DP {dp}"))?;
    ensure((memoryless - 0.75).abs() <= 1e-12, format!("engine memoryless {memoryless}"))?;
    Ok(format!("DP 5/6, best i.i.d. 3/4 (engine {dp:.15}, {memoryless:.15})"))
}

fn random_weights(rng: &mut ChaCha8Rng) -> Vec<Ratio> {
    let raw: Vec<i64> = (0..15).map(|_| if rng.random_bool(0.3) { 0 } else { rng.random_range(0..1000) }).collect();
    let raw = if raw.iter().all(|&x| x == 0) { vec![1; 15] } else { raw };
    let total: i64 = raw.iter().sum();
    raw.iter().map(|&x| ratio(x, total)).collect()
}

/// Engine order (setting pair * 4 + result pair) to oracle order
/// (result pair * 4 + setting pair), dropping 00.
fn oracle_vector(d: &OutcomeDistribution) -> Vec<Q> {
    let mut v = vec![Q::zero(); 12];
    for o in Outcome::non00() {
        let (sp, rp) = (o.index() / 4, o.index() % 4);
        v[rp * 4 + sp] = d.weight(o).clone();
    }
    v
}

fn hull_member(d: &OutcomeDistribution, vertices: &[Vec<Q>]) -> bool {
    let target = oracle_vector(d);
    let mut a: Vec<Vec<Q>> = (0..12).map(|r| vertices.iter().map(|v| v[r].clone()).collect()).collect();
    a.push(vec![q(1, 1); 15]);
    let mut b = target;
    b.push(q(1, 1));
    feasible(&a, &b)
}

fn polytope_suite() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for v in DeterministicStrategy::clicking() {
        let d = induced_non00_distribution(&v, &half(), &half()).map_err(|e| e.to_string())?;
        let r = check_constraints(&d);
        ensure(r.equality_residuals.iter().all(Zero::is_zero), format!("v{} residuals", v.index))?;
        ensure(r.inequality_slacks.iter().all(|s| !s.is_positive()), format!("v{} slacks", v.index))?;
    }
    for i in 0..1000 {
        let w = random_weights(&mut rng);
        let d = random_local_mixture(&w).map_err(|e| e.to_string())?;
        let r = check_constraints(&d);
        ensure(
            r.equality_residuals.iter().all(Zero::is_zero) && r.inequality_slacks.iter().all(|s| !s.is_positive()),
            format!("mixture {i} fails"),
        )?;
        let fine = fine_construct(&w).map_err(|e| e.to_string())?;
        ensure(
            fine.distribution.condition_non00().map_err(|e| e.to_string())? == d,
            format!("fine construction {i} does not round-trip"),
        )?;
    }
    let g = giustina_2013_printed();
    let slacks = check_constraints(&g).inequality_slacks;
    ensure(slacks[0] == ratio(7, 1000), format!("Eberhard slack {}", slacks[0]))?;
    let e2 = StepSpec::builtin(BuiltinSpec::JE2).constraint_value(&g);
    let e3 = StepSpec::builtin(BuiltinSpec::JE3).constraint_value(&g);
    ensure(e2 == ratio(7, 1000) && e3 == ratio(7, 1000), format!("J_E2 {e2}, J_E3 {e3}"))?;

    let vertices = common::vertex_matrix();
    ensure(!hull_member(&g, &vertices), "LP oracle accepts the Giustina table")?;
    let center = random_local_mixture(&vec![ratio(1, 15); 15]).unwrap();
    // Directions that keep normalization and the no-signaling equalities,
    // over the twelve non-00 coordinates.
    let non00: Vec<usize> = Outcome::non00().map(|o| o.index()).collect();
    let mut rows: Vec<Vec<Q>> = no_signaling_forms()
        .iter()
        .map(|f| {
            let dense = f.dense();
            non00.iter().map(|&i| q(dense[i], 1)).collect()
        })
        .collect();
    rows.push(vec![q(1, 1); 12]);
    let basis = common::nullspace(&rows);
    ensure(basis.len() == 7, format!("expected a 7-dimensional affine hull, got {}", basis.len()))?;
    let mut members = 0;
    let mut tries = 0;
    while members < 100 {
        tries += 1;
        ensure(tries < 100_000, "could not sample constraint-satisfying points")?;
        let scale = ratio(rng.random_range(1..=40), 40);
        let mut w: Vec<Ratio> = center.weights().to_vec();
        for dir in &basis {
            let c = &scale * ratio(rng.random_range(-20..=20), 200);
            for (k, &i) in non00.iter().enumerate() {
                w[i] += &c * &dir[k];
            }
        }
        let Ok(d) = OutcomeDistribution::new(w, SupportMode::Non00) else { continue };
        let r = check_constraints(&d);
        if !r.is_local_boundary_consistent {
            continue;
        }
        ensure(hull_member(&d, &vertices), format!("constraint-satisfying point {members} not in hull"))?;
        members += 1;
    }
    Ok(format!("15 vertices, 1000 mixtures, 1000 round-trips, Giustina slacks +7/1000, LP oracle 100/100 ({tries} draws)"))
}

fn monte_carlo() -> CheckResult {
    let set = ch_set();
    let dp = exact_pvalue_dp(447, 19359, &set, true).map_err(|e| e.to_string())?;
    let t = Instant::now();
    let r = simulate_adversary(&dp, 447, 19359, 100_000, 2024).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    ensure(r.interval.contains(0.0136), format!("0.0136 outside [{}, {}]", r.interval.lower, r.interval.upper))?;

    let g = giustina_2013().map_err(|e| e.to_string())?;
    let n = 100_000u64;
    let cfg = SimulationConfig { distribution: g.clone(), n_trials: n, runs: 1, seed: 77 };
    let walk = reduce_trials(&simulate_iid(&cfg).unwrap(), &StepSpec::builtin(BuiltinSpec::J)).unwrap();
    let f = |name: &str| chcert::rational::to_f64(g.weight(out(name)));
    let p_plus = f("++ab");
    let p_minus = f("+0ab'") + f("0+a'b") + f("++a'b'");
    let nf = n as f64;
    let (em, sm) = (nf * (p_plus + p_minus), (nf * (p_plus + p_minus) * (1.0 - p_plus - p_minus)).sqrt());
    let (ej, sj) = (nf * (p_plus - p_minus), (nf * (p_plus + p_minus - (p_plus - p_minus).powi(2))).sqrt());
    let m = walk.m() as f64;
    let j = chcert::rational::to_f64(&walk.final_value);
    ensure((m - em).abs() <= 3.0 * sm, format!("m {m} vs {em:.0} ± {sm:.0}"))?;
    ensure((j - ej).abs() <= 3.0 * sj, format!("J {j} vs {ej:.0} ± {sj:.0}"))?;
    Ok(format!(
        "adversary {}/{} = {:.5} in [{:.5}, {:.5}] ({elapsed:.0?}); iid m {m} (E {em:.0}), J {j} (E {ej:.0})",
        r.successes, r.runs, r.frequency, r.interval.lower, r.interval.upper
    ))
}

fn verifier() -> CheckResult {
    let induced = |k: u8| induced_non00_distribution(&DeterministicStrategy::get(k).unwrap(), &half(), &half()).unwrap();
    let spec = StepSpec::builtin(BuiltinSpec::Ch);
    let cfg = VerifierConfig { runs: 20_000, trials_per_run: 50, max_depth: 8, min_bucket_count: 500, seed: 11, ..Default::default() };
    let local = MemorySequenceSpec::new(vec![(Trigger::LastStepPositive, induced(9)), (Trigger::Always, induced(1))])
        .map_err(|e| e.to_string())?;
    let ok = verify_derived_supermartingale(&local, &spec, &cfg).map_err(|e| e.to_string())?;
    ensure(ok.passed(), format!("local source flagged: {:?}", ok.violations.first()))?;
    let mut bad = std::collections::BTreeMap::new();
    bad.insert(out("++ab'"), ratio(3, 5));
    bad.insert(out("+0ab"), ratio(2, 5));
    let bad = OutcomeDistribution::from_map(&bad, SupportMode::Non00).unwrap();
    let signaling = MemorySequenceSpec::new_unchecked(vec![(Trigger::Always, bad)]).unwrap();
    let flagged = verify_derived_supermartingale(&signaling, &spec, &cfg).map_err(|e| e.to_string())?;
    ensure(!flagged.passed(), "signaling source not flagged")?;
    Ok(format!(
        "{} trials, {} buckets, max z {:.2} < {:.2}; signaling source flagged in {} buckets",
        ok.trials,
        ok.buckets_examined,
        ok.max_z,
        ok.threshold_sigmas,
        flagged.violations.len()
    ))
}

fn full_scale() -> CheckResult {
    let set = ch_set().undominated();
    let t = Instant::now();
    let p = exact_pvalue_dp(4258, 131116, &set, false).map_err(|e| e.to_string())?.p_value;
    let elapsed = t.elapsed();
    ensure(elapsed < Duration::from_secs(600), format!("took {elapsed:?}"))?;
    ensure(p <= 8.0e-16, format!("{p:e} exceeds the bound"))?;
    Ok(format!("{p:.4e} in {elapsed:.0?}"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("backward induction columns", backward_columns),
        ("exact Ch p-values", exact_ch),
        ("McDiarmid bound", mcdiarmid),
        ("binomial and normal", binomial_normal),
        ("setting-bias adjustment", setting_bias),
        ("binary collapse", binary_collapse),
        ("brute-force game tree", brute_force),
        ("memory gap", memory_gap),
        ("polytope suite", polytope_suite),
        ("Monte Carlo cross-validation", monte_carlo),
        ("supermartingale verifier", verifier),
        ("full-scale DP", full_scale),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = format!("{}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| f == &id) {
            continue;
        }
        let t = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail} [{:.1?}]", t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {why} [{:.1?}]", t.elapsed());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
