//! Checks of the amplifier construction's claimed properties on one instance.

use serde::Serialize;

use crate::basis::{enumerate_basis_with, BasisOptions};
use crate::constructions::{build_amplifier, is_reporter, reference_configuration, AmplifierSpec};
use crate::error::Result;
use crate::model::{Configuration, Tbn};
use crate::ops::config_distance;
use crate::solver::{
    brute_force_stable_with, certify_stable_feed_forward, solve_stable_with, SolveOptions, StableReport,
};

use super::gap::{entropy_gap_with_basis, Gap};
use super::tbn_distance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Not attempted or not finished within budget.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    pub translators: bool,
    pub basis_budget: u64,
    pub node_budget: u64,
    /// Networks with at most this many monomers are also solved by brute force.
    pub brute_force_cap: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            translators: false,
            basis_budget: 5_000_000,
            node_budget: 5_000_000,
            brute_force_cap: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmplifierVerification {
    pub n: u32,
    pub k: u32,
    pub translators: bool,
    pub monomers: u64,
    pub monomers_with_analyte: u64,
    pub reference_polymers: u64,
    pub reference_polymers_with_analyte: u64,
    pub reference_distance: u64,
    /// Distance between the two networks' stable sets, when both solved.
    pub tbn_distance: Option<u64>,
    pub checks: Vec<Check>,
}

impl AmplifierVerification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.0.push(Check {
            name: name.to_string(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            detail: detail.into(),
        });
    }

    fn skip(&mut self, name: &str, detail: impl Into<String>) {
        self.0.push(Check { name: name.to_string(), status: CheckStatus::Skipped, detail: detail.into() });
    }
}

/// Runs the construction checks for `(n, k)`. Solver-based checks are
/// skipped when basis enumeration or search exceeds its budget.
pub fn verify_amplifier(n: u32, k: u32, options: &VerifyOptions) -> Result<AmplifierVerification> {
    let spec = AmplifierSpec::new(n, k, false, options.translators)?;
    let spec_a = spec.with_analyte(true);
    let tbn = build_amplifier(&spec)?;
    let tbn_a = build_amplifier(&spec_a)?;
    let sigma = reference_configuration(&spec)?;
    let sigma_a = reference_configuration(&spec_a)?;
    let mut checks = Checks(Vec::new());

    let types = tbn_a.num_monomer_types() as u64;
    checks.push(
        "monomer_types",
        types == spec_a.expected_monomer_types(),
        format!("{types} monomer types, expected {}", spec_a.expected_monomer_types()),
    );
    let domains = tbn_a.site_names().len() as u64;
    checks.push(
        "domain_types",
        domains == spec_a.expected_domain_types(),
        format!("{domains} domain types, expected {}", spec_a.expected_domain_types()),
    );
    // p* and the analyte have k^2 sites, each s monomer 3k, each h 2k^2
    let expected_largest = if options.translators { 2 * k * k } else { k * k }.max(3 * k);
    let largest = tbn_a.monomer_types().map(|m| m.total_sites()).max().unwrap_or(0);
    checks.push(
        "max_monomer_size",
        largest == expected_largest,
        format!("largest monomer has {largest} sites, expected {expected_largest}"),
    );
    checks.push(
        "star_limiting",
        tbn.is_star_limiting() && tbn_a.is_star_limiting(),
        "both networks star-limiting",
    );
    checks.push(
        "feed_forward",
        tbn.is_feed_forward() && tbn_a.is_feed_forward(),
        "both networks feed-forward",
    );
    checks.push(
        "reference_saturated",
        sigma.is_saturated() && sigma_a.is_saturated(),
        format!(
            "reference configurations have {} and {} polymers",
            sigma.polymer_count(),
            sigma_a.polymer_count()
        ),
    );

    let certified_a = certify_stable_feed_forward(&sigma_a)?;
    checks.push(
        "analyte_reference_certified",
        certified_a,
        format!("merginess {} vs starriness of melt {}", sigma_a.merginess(), tbn_a.melt().starriness()),
    );
    let excess = sigma.merginess() as i64 - tbn.melt().starriness() as i64;
    let expected_excess = spec.payoff_count() as i64 - 1;
    checks.push(
        "reference_merge_excess",
        excess == expected_excess,
        format!("reference needs {excess} merges beyond the certificate, expected {expected_excess}"),
    );

    let (bound_before, free_after, freed) = reporter_counts(&sigma, &sigma_a);
    let reporters: u64 = tbn.iter().filter(|(m, _)| is_reporter(m)).map(|(_, c)| c as u64).sum();
    checks.push(
        "reporters",
        bound_before == reporters && free_after == reporters && freed >= 1u64 << n,
        format!("{bound_before} of {reporters} reporters bound before, {free_after} free after"),
    );
    if options.translators {
        let size = sigma_a.max_polymer_size();
        checks.push(
            "translator_polymer_size",
            size <= k + 3,
            format!("largest reference polymer has {size} monomers, limit {}", k + 3),
        );
    }
    let reference_distance = config_distance(&sigma, &sigma_a);
    checks.push(
        "reference_distance",
        reference_distance >= 1u64 << n,
        format!("distance {reference_distance}, at least {}", 1u64 << n),
    );

    // with translators the analyte network has several stable
    // configurations and a weaker gap property, and the distance is strict
    let solved = solve_exact(&tbn, &sigma, Role::Unique, options, &mut checks);
    let analyte_role = if options.translators { Role::AmongStable } else { Role::Unique };
    let solved_a = solve_exact(&tbn_a, &sigma_a, analyte_role, options, &mut checks);
    let distance = match (&solved, &solved_a) {
        (Some(r), Some(ra)) => {
            let d = tbn_distance(r, ra)?;
            let least = (1u64 << n) + options.translators as u64;
            checks.push("tbn_distance", d >= least, format!("d(T, T^a) = {d}, at least {least}"));
            Some(d)
        }
        _ => {
            checks.skip("tbn_distance", "needs both networks solved");
            None
        }
    };

    Ok(AmplifierVerification {
        n,
        k,
        translators: options.translators,
        monomers: tbn.total_monomers(),
        monomers_with_analyte: tbn_a.total_monomers(),
        reference_polymers: sigma.polymer_count(),
        reference_polymers_with_analyte: sigma_a.polymer_count(),
        reference_distance,
        tbn_distance: distance,
        checks: checks.0,
    })
}

/// Reporters bound in `before`, free in `after`, and freed (both).
fn reporter_counts(before: &Configuration, after: &Configuration) -> (u64, u64, u64) {
    let count = |config: &Configuration, singleton: bool| -> u64 {
        config
            .iter()
            .flat_map(|(p, c)| {
                p.monomers()
                    .iter()
                    .filter(|(m, _)| is_reporter(m))
                    .map(move |(_, k)| (p.size() == 1, *k as u64 * c as u64))
            })
            .filter(|(alone, _)| *alone == singleton)
            .map(|(_, n)| n)
            .sum()
    };
    let bound = count(before, false);
    let free = count(after, true);
    (bound, free, bound.min(free))
}

/// What is claimed about a network's reference configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    /// The only stable configuration, with the entropy gap.
    Unique,
    /// One of the stable configurations of the analyte network.
    AmongStable,
}

/// Solves `tbn` exactly within budget and records the claims of `role`,
/// plus agreement with brute force on small networks. `None` when skipped.
fn solve_exact(
    tbn: &Tbn,
    reference: &Configuration,
    role: Role,
    options: &VerifyOptions,
    checks: &mut Checks,
) -> Option<StableReport> {
    let prefix = if tbn.by_label("a").is_some() { "analyte_" } else { "" };
    let stable_check = match role {
        Role::Unique => "unique_stable",
        Role::AmongStable => "reference_stable",
    };
    let name = |s: &str| format!("{prefix}{s}");
    let basis = match enumerate_basis_with(
        tbn,
        &BasisOptions {
            size_cap: tbn.total_monomers().max(1) as u32,
            within_counts: true,
            candidate_budget: options.basis_budget,
        },
    ) {
        Ok(b) => b,
        Err(e) => {
            checks.skip(&name(stable_check), format!("basis enumeration: {e}"));
            if role == Role::Unique {
                checks.skip(&name("entropy_gap"), "needs the basis");
            }
            return None;
        }
    };
    let report = match solve_stable_with(
        tbn,
        &basis,
        &SolveOptions { node_budget: options.node_budget, ..SolveOptions::default() },
    ) {
        Ok(r) => r,
        Err(e) => {
            checks.skip(&name(stable_check), format!("search: {e}"));
            if role == Role::Unique {
                checks.skip(&name("entropy_gap"), "needs the optimum");
            }
            return None;
        }
    };
    let holds = match role {
        Role::Unique => report.unique() == Some(true) && report.all_optima[0] == *reference,
        Role::AmongStable => {
            report.exact
                && report.optimum == reference.polymer_count()
                && report.all_optima.contains(reference)
        }
    };
    checks.push(
        &name(stable_check),
        holds,
        format!(
            "optimum {} with {} stable configuration(s), reference has {} polymers",
            report.optimum,
            report.all_optima.len(),
            reference.polymer_count()
        ),
    );

    if tbn.total_monomers() <= options.brute_force_cap {
        match brute_force_stable_with(tbn, options.brute_force_cap) {
            Ok(brute) => checks.push(
                &name("brute_force_agrees"),
                brute.optimum == report.optimum && brute.all_optima == report.all_optima,
                format!(
                    "brute force: optimum {}, {} stable configuration(s)",
                    brute.optimum,
                    brute.all_optima.len()
                ),
            ),
            Err(e) => checks.skip(&name("brute_force_agrees"), e.to_string()),
        }
    }

    if role != Role::Unique {
        return Some(report);
    }
    let k = reference_k(tbn);
    let expected = (k / 2).saturating_sub(1) as u64;
    match entropy_gap_with_basis(tbn, &basis, report.optimum, options.node_budget) {
        Ok(g) if g.exhaustive => checks.push(
            &name("entropy_gap"),
            g.gap.at_least(expected),
            format!("gap {}, at least {expected}", g.gap),
        ),
        Ok(g) => checks.skip(
            &name("entropy_gap"),
            format!(
                "budget exceeded; gap at most {}",
                if g.witness.is_some() { g.gap } else { Gap::Infinite }
            ),
        ),
        Err(e) => checks.skip(&name("entropy_gap"), e.to_string()),
    }
    Some(report)
}

/// `k` recovered from the payoff monomer `p*`, which has `k^2` sites.
fn reference_k(tbn: &Tbn) -> u32 {
    tbn.by_label("p*").map(|m| (m.total_sites() as f64).sqrt().round() as u32).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n1_k3_passes() {
        let v = verify_amplifier(1, 3, &VerifyOptions::default()).unwrap();
        for c in &v.checks {
            assert_ne!(c.status, CheckStatus::Fail, "{c:?}");
        }
        assert_eq!(v.tbn_distance, Some(v.reference_distance));
    }

    #[test]
    fn k2_analyte_tie_is_reported() {
        let v = verify_amplifier(1, 2, &VerifyOptions::default()).unwrap();
        assert_eq!(v.check("unique_stable").unwrap().status, CheckStatus::Pass);
        assert_eq!(v.check("analyte_unique_stable").unwrap().status, CheckStatus::Fail);
        assert_eq!(v.check("analyte_brute_force_agrees").unwrap().status, CheckStatus::Pass);
        assert!(!v.passed());
    }

    #[test]
    fn translator_analyte_reference_is_one_of_several() {
        let options = VerifyOptions { translators: true, ..VerifyOptions::default() };
        let v = verify_amplifier(1, 3, &options).unwrap();
        assert!(v.passed(), "{:?}", v.checks);
        assert!(v.check("analyte_unique_stable").is_none());
        assert!(v.check("analyte_reference_stable").unwrap().detail.contains("2 stable"));
    }
}
