//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the output.
//!
//! The process fails when the set of failing criteria differs from
//! `EXPECTED_FAILURES`, so regressions and unexpected fixes both surface.

mod common;

use std::collections::BTreeSet;
use std::panic;
use std::time::{Duration, Instant};

use tbn::analysis::{
    entropy_gap_default, polymer_size_bound, tbn_distance, upper_bound_log10, verify_amplifier, CheckStatus,
    Gap, TbnStats, VerifyOptions,
};
use tbn::constructions::{
    build_amplifier, figure_examples, is_reporter, reference_configuration, AmplifierSpec,
};
use tbn::io::{parse_configuration, parse_tbn, serialize_configuration, serialize_tbn};
use tbn::model::{Configuration, Tbn};
use tbn::ops::{config_distance, feed_forward_order, splits_to};
use tbn::solver::{
    brute_force_stable_with, certify_stable_feed_forward, for_each_saturated, solve, StableReport, WalkLimits,
};

use common::{all_configurations, golden_dir, random_suite};

/// T^a_{1,2} has eight tied stable configurations, and the distance between
/// the two networks is 1.
const EXPECTED_FAILURES: &[u32] = &[3];

type Outcome = Result<String, String>;

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn amplifier(n: u32, k: u32, analyte: bool, translators: bool) -> Result<(Tbn, Configuration), String> {
    let spec = AmplifierSpec::new(n, k, analyte, translators).map_err(err)?;
    Ok((build_amplifier(&spec).map_err(err)?, reference_configuration(&spec).map_err(err)?))
}

fn figure_one() -> Outcome {
    let examples = figure_examples();
    let ex = &examples["figure1"];
    let report = solve(&ex.tbn).map_err(err)?;
    let stable = ex.configuration("stable").ok_or("missing stable configuration")?;
    let two = ex.configuration("two_polymers").ok_or("missing two-polymer configuration")?;
    ensure(report.optimum == 3, || format!("optimum {}", report.optimum))?;
    ensure(report.unique() == Some(true) && report.all_optima[0] == *stable, || {
        format!("stable configurations {:?}", report.all_optima)
    })?;
    ensure(two.is_saturated(), || "two-polymer configuration is not saturated".into())?;
    let distance = two.distance_to_stability(report.optimum).map_err(err)?;
    ensure(distance == 1, || format!("distance to stability {distance}"))?;
    Ok("optimum 3, pictured stable configuration, 2-polymer configuration at distance 1".into())
}

fn theorem_counts() -> Outcome {
    let (tbn, sigma) = amplifier(2, 3, false, false)?;
    let (_, sigma_a) = amplifier(2, 3, true, false)?;
    ensure(tbn.total_monomers() == 39, || format!("{} monomers", tbn.total_monomers()))?;
    ensure(sigma.is_saturated() && sigma.polymer_count() == 19, || {
        format!("reference has {} polymers", sigma.polymer_count())
    })?;
    ensure(sigma_a.is_saturated() && sigma_a.polymer_count() == 21, || {
        format!("analyte reference has {} polymers", sigma_a.polymer_count())
    })?;
    ensure(certify_stable_feed_forward(&sigma_a).map_err(err)?, || {
        "analyte reference is not certified".into()
    })?;
    let d = config_distance(&sigma, &sigma_a);
    ensure(d == 40, || format!("distance {d}"))?;
    Ok("39 monomers, 19 and 21 polymers, certified, distance 40".into())
}

fn exhaustive_uniqueness() -> Outcome {
    let mut reports: Vec<StableReport> = Vec::new();
    let mut problems = Vec::new();
    for analyte in [false, true] {
        let (tbn, reference) = amplifier(1, 2, analyte, false)?;
        let brute = brute_force_stable_with(&tbn, 12).map_err(err)?;
        let solved = solve(&tbn).map_err(err)?;
        let name = if analyte { "T^a_{1,2}" } else { "T_{1,2}" };
        if brute.optimum != solved.optimum || brute.all_optima != solved.all_optima {
            problems.push(format!("{name}: solver and brute force disagree"));
        }
        if brute.all_optima.len() != 1 {
            problems.push(format!(
                "{name} ({} monomers): {} stable configurations at optimum {}",
                tbn.total_monomers(),
                brute.all_optima.len(),
                brute.optimum
            ));
        } else if brute.all_optima[0] != reference {
            problems.push(format!("{name}: stable configuration differs from the reference"));
        }
        reports.push(solved);
    }
    let d = tbn_distance(&reports[0], &reports[1]).map_err(err)?;
    if d < 2 {
        problems.push(format!("d(T, T^a) = {d} < 2"));
    }
    ensure(problems.is_empty(), || problems.join("; "))?;
    Ok(format!("both unique and match references, distance {d}"))
}

fn reporters() -> Outcome {
    let mut checked = 0;
    for n in 1..=2 {
        for k in 2..=4 {
            let (_, sigma) = amplifier(n, k, false, false)?;
            let (_, sigma_a) = amplifier(n, k, true, false)?;
            let mut freed = 0u64;
            for (p, _) in sigma.iter() {
                for (m, _) in p.monomers().iter().filter(|(m, _)| is_reporter(m)) {
                    ensure(p.size() > 1, || format!("n={n} k={k}: {} free before", m.display_name()))?;
                }
            }
            for (p, c) in sigma_a.iter() {
                for (m, k_m) in p.monomers().iter().filter(|(m, _)| is_reporter(m)) {
                    ensure(p.size() == 1, || format!("n={n} k={k}: {} bound after", m.display_name()))?;
                    freed += *k_m as u64 * c as u64;
                }
            }
            ensure(freed >= 1 << n, || format!("n={n} k={k}: {freed} reporters freed"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} instances, all reporters bound then free"))
}

fn oracle_equivalence() -> Outcome {
    let suite = random_suite(5, 1000, 12, 4);
    let mut mismatches = Vec::new();
    for (i, tbn) in suite.iter().enumerate() {
        let solved = solve(tbn).map_err(err)?;
        let brute = brute_force_stable_with(tbn, 12).map_err(err)?;
        if solved.optimum != brute.optimum || solved.all_optima != brute.all_optima {
            mismatches.push(i);
        }
    }
    ensure(mismatches.is_empty(), || format!("mismatches at {mismatches:?}"))?;
    Ok(format!("{} random TBNs, zero mismatches", suite.len()))
}

/// Every saturated configuration is stable, splits to a stable one, or is
/// at least `gap` from stability; the witness shows the gap is attained.
fn gap_disjunction(tbn: &Tbn, cap: u64) -> Result<Gap, String> {
    let report = solve(tbn).map_err(err)?;
    let gap = entropy_gap_default(tbn, &report).map_err(err)?;
    ensure(gap.exhaustive, || "gap search incomplete".into())?;
    ensure(gap.gap.at_least(1), || format!("gap {}", gap.gap))?;
    let stable = &report.all_optima;
    let mut failure = None;
    for_each_saturated(tbn, WalkLimits { monomer_cap: cap, min_polymers: 0 }, |alpha| {
        if failure.is_some() || alpha.polymer_count() == report.optimum {
            return;
        }
        let splits = stable.iter().any(|s| splits_to(alpha, s).unwrap_or(false));
        let distance = report.optimum - alpha.polymer_count();
        let far = matches!(gap.gap, Gap::Finite(g) if distance >= g);
        if !splits && !far {
            failure = Some(format!("{alpha:?} at distance {distance} violates gap {}", gap.gap));
        }
    })
    .map_err(err)?;
    if let Some(f) = failure {
        return Err(f);
    }
    if let (Gap::Finite(g), Some(w)) = (gap.gap, &gap.witness) {
        ensure(w.is_saturated() && report.optimum - w.polymer_count() == g, || {
            "witness is not at the gap".into()
        })?;
        ensure(!stable.iter().any(|s| splits_to(w, s).unwrap_or(true)), || {
            "witness splits to stable".into()
        })?;
    }
    Ok(gap.gap)
}

fn entropy_gap_suite() -> Outcome {
    let examples = figure_examples();
    let mut notes = Vec::new();
    let g = gap_disjunction(&examples["figure1"].tbn, 12)?;
    notes.push(format!("figure 1 gap {g}"));
    for k in [2, 3] {
        let (tbn, _) = amplifier(1, k, false, false)?;
        let g = gap_disjunction(&tbn, 16)?;
        notes.push(format!("T_{{1,{k}}} gap {g}"));
    }
    let suite = random_suite(6, 300, 10, 4);
    for tbn in &suite {
        gap_disjunction(tbn, 10)?;
    }
    notes.push(format!("{} random TBNs", suite.len()));

    let v = verify_amplifier(1, 4, &VerifyOptions::default()).map_err(err)?;
    for name in ["entropy_gap", "analyte_entropy_gap"] {
        let c = v.check(name).ok_or(format!("no {name} check"))?;
        match c.status {
            CheckStatus::Pass => notes.push(format!("(1,4) {name}: {}", c.detail)),
            CheckStatus::Skipped => notes.push(format!("(1,4) {name} partially verified: {}", c.detail)),
            CheckStatus::Fail => return Err(format!("(1,4) {name}: {}", c.detail)),
        }
    }
    Ok(notes.join(", "))
}

fn translator_variant() -> Outcome {
    let (_, sigma) = amplifier(2, 3, true, true)?;
    ensure(sigma.is_saturated(), || "reference is not saturated".into())?;
    let largest = sigma.max_polymer_size();
    ensure(largest <= 6, || format!("largest polymer has {largest} monomers"))?;
    let certified = certify_stable_feed_forward(&sigma).map_err(err)?;
    ensure(certified, || "reference is not certified stable".into())?;
    Ok(format!(
        "saturated, largest polymer {largest}, certified stable with {} polymers",
        sigma.polymer_count()
    ))
}

fn feed_forward_lemma() -> Outcome {
    let mut tbns = 0;
    let mut pairs = 0u64;
    for tbn in random_suite(8, 400, 8, 4).iter().filter(|t| t.is_feed_forward()) {
        tbns += 1;
        let mut saturated = Vec::new();
        for_each_saturated(tbn, WalkLimits { monomer_cap: 8, min_polymers: 0 }, |c| {
            saturated.push(c.clone())
        })
        .map_err(err)?;
        for alpha in all_configurations(tbn) {
            if feed_forward_order(&alpha).is_none() {
                continue;
            }
            for sigma in &saturated {
                if !splits_to(sigma, &alpha).map_err(err)? {
                    continue;
                }
                pairs += 1;
                let merged = sigma.merginess() - alpha.merginess();
                ensure(merged >= alpha.starriness(), || {
                    format!("{alpha:?} -> {sigma:?}: {merged} merges < starriness {}", alpha.starriness())
                })?;
            }
        }
    }
    ensure(tbns > 50, || format!("only {tbns} feed-forward TBNs"))?;
    Ok(format!("{tbns} feed-forward TBNs, {pairs} (alpha, sigma) pairs, zero violations"))
}

fn bounds() -> Outcome {
    let size = polymer_size_bound(&TbnStats::new(2, 2, 2));
    ensure(size == 131072u32.into(), || format!("size bound {size}"))?;
    let mut last = f64::NEG_INFINITY;
    for n in 2..=10 {
        let b = upper_bound_log10(&TbnStats::new(n, n, n)).map_err(err)?;
        ensure(b.log10_log10.is_finite() && b.log10_log10 > last, || {
            format!("n={n}: log10 log10 bound {}", b.log10_log10)
        })?;
        last = b.log10_log10;
    }
    Ok("size bound 131072, distance bound finite and increasing for n = 2..10".into())
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut errors = Vec::new();
    let code = tbn::cli::run(std::iter::once("tbn").chain(args.iter().copied()), &mut out, &mut errors);
    (code, String::from_utf8(out).expect("utf-8 output"))
}

fn round_trip_and_golden() -> Outcome {
    let mut count = 0;
    let mut check = |tbn: &Tbn, configs: &[&Configuration]| -> Result<(), String> {
        let text = serialize_tbn(tbn);
        let back = parse_tbn(&text).map_err(err)?;
        ensure(back.same_monomers(tbn) && serialize_tbn(&back) == text, || {
            format!("TBN round trip:\n{text}")
        })?;
        for c in configs {
            let ctext = serialize_configuration(c);
            ensure(parse_configuration(&ctext, &back).map_err(err)? == **c, || {
                format!("configuration round trip:\n{ctext}")
            })?;
        }
        count += 1;
        Ok(())
    };
    for n in 1..=3 {
        for k in 2..=4 {
            for (analyte, translators) in [(false, false), (true, false), (false, true), (true, true)] {
                let (tbn, sigma) = amplifier(n, k, analyte, translators)?;
                check(&tbn, &[&sigma])?;
            }
        }
    }
    for ex in figure_examples().values() {
        let configs: Vec<&Configuration> = ex.configurations.iter().map(|(_, c)| c).collect();
        check(&ex.tbn, &configs)?;
    }
    for tbn in random_suite(10, 1000, 12, 4) {
        check(&tbn, &[&tbn.melt()])?;
    }

    let dir = golden_dir();
    let read = |name: &str| std::fs::read_to_string(dir.join(name)).map_err(|e| format!("{name}: {e}"));
    let figure_file = dir.join("figure1.tbn");
    let figure_path = figure_file.to_str().ok_or("non-UTF-8 path")?;
    ensure(read("figure1.tbn")? == serialize_tbn(&figure_examples()["figure1"].tbn), || {
        "figure1.tbn differs from the built-in example".into()
    })?;
    let goldens = [
        ("figure1_solve.json", vec!["solve", figure_path, "--all", "--lex", "--format", "json"], 0),
        ("figure1_gap.json", vec!["gap", figure_path, "--format", "json"], 0),
        ("verify_n1_k2.json", vec!["verify", "-n", "1", "-k", "2", "--format", "json"], 1),
    ];
    for (name, args, expected_code) in goldens {
        let (code, out) = cli(&args);
        ensure(code == expected_code, || format!("{name}: exit {code}"))?;
        ensure(out == read(name)?, || format!("{name} differs:\n{out}"))?;
    }
    Ok(format!("{count} round trips, 3 golden outputs byte-exact"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "figure 1 reproduction",
            limit: Some(Duration::from_secs(1)),
            run: figure_one,
        },
        Criterion {
            id: 2,
            name: "amplifier counts at (2,3)",
            limit: Some(Duration::from_secs(10)),
            run: theorem_counts,
        },
        Criterion {
            id: 3,
            name: "exhaustive uniqueness at (1,2)",
            limit: Some(Duration::from_secs(60)),
            run: exhaustive_uniqueness,
        },
        Criterion { id: 4, name: "reporter property", limit: None, run: reporters },
        Criterion { id: 5, name: "oracle equivalence", limit: None, run: oracle_equivalence },
        Criterion {
            id: 6,
            name: "entropy-gap property suite",
            limit: Some(Duration::from_secs(600)),
            run: entropy_gap_suite,
        },
        Criterion { id: 7, name: "translator variant at (2,3)", limit: None, run: translator_variant },
        Criterion { id: 8, name: "feed-forward lemma", limit: None, run: feed_forward_lemma },
        Criterion { id: 9, name: "bound evaluators", limit: None, run: bounds },
        Criterion { id: 10, name: "round trips and golden files", limit: None, run: round_trip_and_golden },
    ];
    let mut failed = BTreeSet::new();
    for c in &criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(c.run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took longer than {limit:?}")),
            (o, _) => o,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if outcome.is_err() {
            failed.insert(c.id);
        }
        println!("{status} {:>2} {} ({:.2} s): {detail}", c.id, c.name, elapsed.as_secs_f64());
    }
    let expected: BTreeSet<u32> = EXPECTED_FAILURES.iter().copied().collect();
    println!(
        "{} of {} criteria pass; failing {:?}, expected failing {:?}",
        criteria.len() - failed.len(),
        criteria.len(),
        failed,
        expected
    );
    if failed != expected {
        std::process::exit(1);
    }
}
