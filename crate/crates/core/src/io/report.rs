//! JSON and text renderings of analysis results.
//!
//! JSON field names are part of the command-line interface and stay fixed.

use std::fmt::Write as _;

use serde::Serialize;

use crate::analysis::{AmplifierVerification, CheckStatus, DistanceBound, EntropyGapReport, Gap};
use crate::basis::PolymerBasis;
use crate::model::{Configuration, Polymer, Tbn};
use crate::solver::{Certificate, StableReport};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolymerJson {
    pub count: u32,
    pub monomers: Vec<String>,
}

impl PolymerJson {
    fn new(polymer: &Polymer, count: u32) -> Self {
        let monomers = polymer
            .monomers()
            .iter()
            .flat_map(|(m, c)| std::iter::repeat_n(m.display_name(), *c as usize))
            .collect();
        PolymerJson { count, monomers }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigurationJson {
    pub polymers: Vec<PolymerJson>,
}

impl From<&Configuration> for ConfigurationJson {
    fn from(config: &Configuration) -> Self {
        ConfigurationJson { polymers: config.iter().map(|(p, c)| PolymerJson::new(p, c)).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveJson {
    pub optimum: u64,
    pub exact: bool,
    pub certificate: Certificate,
    pub unique: Option<bool>,
    pub optima_complete: bool,
    /// Every stable configuration, or only the first when not all requested.
    pub optima: Vec<ConfigurationJson>,
    pub lex_earliest: Option<ConfigurationJson>,
}

impl SolveJson {
    pub fn new(report: &StableReport, all: bool, lex: bool) -> Self {
        let take = if all { report.all_optima.len() } else { 1 };
        SolveJson {
            optimum: report.optimum,
            exact: report.exact,
            certificate: report.certificate,
            unique: report.unique(),
            optima_complete: report.optima_complete,
            optima: report.all_optima.iter().take(take).map(ConfigurationJson::from).collect(),
            lex_earliest: lex.then(|| ConfigurationJson::from(&report.lex_earliest)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapJson {
    pub optimum: u64,
    pub gap: Gap,
    pub exhaustive: bool,
    pub witness: Option<ConfigurationJson>,
}

impl GapJson {
    pub fn new(optimum: u64, report: &EntropyGapReport) -> Self {
        GapJson {
            optimum,
            gap: report.gap,
            exhaustive: report.exhaustive,
            witness: report.witness.as_ref().map(ConfigurationJson::from),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisJson {
    pub size_cap: u32,
    /// Complete for every network over these monomer types.
    pub complete: bool,
    /// Complete for the network it was computed from.
    pub exhaustive: bool,
    pub count: usize,
    pub polymers: Vec<Vec<String>>,
}

impl BasisJson {
    pub fn new(basis: &PolymerBasis, tbn: &Tbn) -> Self {
        BasisJson {
            size_cap: basis.size_cap_used(),
            complete: basis.is_complete(),
            exhaustive: basis.is_exhaustive_for(tbn),
            count: basis.len(),
            polymers: basis.polymers().iter().map(|p| PolymerJson::new(p, 1).monomers).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundJson {
    pub d: u64,
    pub m: u64,
    pub a: u64,
    /// Decimal string, since it can exceed 64 bits.
    pub polymer_size_bound: String,
    pub distance_bound: DistanceBound,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn configuration_text(out: &mut String, config: &Configuration) {
    if config.polymer_count() == 0 {
        out.push_str("  (empty)\n");
    }
    for (polymer, count) in config.iter() {
        writeln!(out, "  {count} * {polymer}").unwrap();
    }
}

pub fn solve_text(report: &StableReport, all: bool, lex: bool) -> String {
    let mut out = String::new();
    writeln!(out, "optimum: {} polymers", report.optimum).unwrap();
    writeln!(out, "exact: {}", report.exact).unwrap();
    let stable = match report.unique() {
        Some(true) => "unique".to_string(),
        Some(false) => format!("{} stable configurations", report.all_optima.len()),
        None => format!("at least {} stable configurations", report.all_optima.len()),
    };
    writeln!(out, "stable: {stable}").unwrap();
    let take = if all { report.all_optima.len() } else { 1 };
    for (i, config) in report.all_optima.iter().take(take).enumerate() {
        writeln!(out, "configuration {}:", i + 1).unwrap();
        configuration_text(&mut out, config);
    }
    if lex {
        writeln!(out, "lex earliest:").unwrap();
        configuration_text(&mut out, &report.lex_earliest);
    }
    out
}

pub fn gap_text(optimum: u64, report: &EntropyGapReport) -> String {
    let mut out = String::new();
    writeln!(out, "optimum: {optimum} polymers").unwrap();
    writeln!(out, "entropy gap: {}", report.gap).unwrap();
    if let Some(w) = &report.witness {
        writeln!(out, "witness ({} polymers):", w.polymer_count()).unwrap();
        configuration_text(&mut out, w);
    }
    out
}

pub fn basis_text(basis: &PolymerBasis, tbn: &Tbn) -> String {
    let mut out = String::new();
    let status = if basis.is_complete() {
        "complete"
    } else if basis.is_exhaustive_for(tbn) {
        "complete for this network"
    } else {
        "may be incomplete"
    };
    writeln!(out, "{} polymers, size cap {}, {status}", basis.len(), basis.size_cap_used()).unwrap();
    for p in basis.polymers() {
        writeln!(out, "  {p}").unwrap();
    }
    out
}

pub fn verify_text(v: &AmplifierVerification) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "amplifier n={} k={}{}: {} and {} monomers, reference {} and {} polymers, distance {}",
        v.n,
        v.k,
        if v.translators { " with translators" } else { "" },
        v.monomers,
        v.monomers_with_analyte,
        v.reference_polymers,
        v.reference_polymers_with_analyte,
        v.reference_distance
    )
    .unwrap();
    for c in &v.checks {
        let status = match c.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIP",
        };
        writeln!(out, "{status} {}: {}", c.name, c.detail).unwrap();
    }
    out
}

pub fn bound_text(b: &BoundJson) -> String {
    let mut out = String::new();
    writeln!(out, "polymer size bound (d={}, m={}, a={}): {}", b.d, b.m, b.a, b.polymer_size_bound).unwrap();
    let dist = &b.distance_bound;
    match dist.log10 {
        Some(l) => writeln!(out, "distance bound (n={}): 10^{l:.6e}", dist.n),
        None => writeln!(out, "distance bound (n={}): 10^10^{:.6}", dist.n, dist.log10_log10),
    }
    .unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::entropy_gap_default;
    use crate::constructions::figure_examples;
    use crate::solver::solve;

    #[test]
    fn figure_one_json() {
        let ex = &figure_examples()["figure1"];
        let report = solve(&ex.tbn).unwrap();
        let json: serde_json::Value =
            serde_json::from_str(&to_json(&SolveJson::new(&report, true, false))).unwrap();
        assert_eq!(json["optimum"], 3);
        assert_eq!(json["certificate"], "ip_exact");
        assert_eq!(json["unique"], true);
        assert_eq!(json["optima"][0]["polymers"].as_array().unwrap().len(), 3);
        assert!(json["lex_earliest"].is_null());
    }

    #[test]
    fn empty_tbn_json() {
        let report = solve(&Tbn::new()).unwrap();
        let json: serde_json::Value =
            serde_json::from_str(&to_json(&SolveJson::new(&report, true, false))).unwrap();
        assert_eq!(json["optimum"], 0);
        assert_eq!(json["optima"], serde_json::json!([{ "polymers": [] }]));
    }

    #[test]
    fn infinite_gap_json() {
        let tbn = crate::io::parse_tbn("a\na*").unwrap();
        let report = solve(&tbn).unwrap();
        let gap = entropy_gap_default(&tbn, &report).unwrap();
        let json: serde_json::Value =
            serde_json::from_str(&to_json(&GapJson::new(report.optimum, &gap))).unwrap();
        assert_eq!(json["gap"], "infinite");
        assert!(json["witness"].is_null());
    }
}
