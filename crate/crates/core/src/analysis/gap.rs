//! Entropy gap and distance between networks.
//!
//! A saturated configuration refines into basis polymers without losing
//! polymers, and a configuration made of basis polymers can only be split
//! into itself. So the saturated configurations that are neither stable nor
//! split to a stable one are, at best, the non-optimal basis configurations,
//! and the gap is the optimum minus the best non-optimal polymer count.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::basis::{basis_for, PolymerBasis};
use crate::error::{Result, TbnError};
use crate::model::{Configuration, Polymer, Tbn};
use crate::ops::config_distance;
use crate::solver::search::{Below, Problem};
use crate::solver::{StableReport, DEFAULT_NODE_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Gap {
    Finite(u64),
    Infinite,
}

impl Gap {
    pub fn at_least(&self, k: u64) -> bool {
        match self {
            Gap::Finite(g) => *g >= k,
            Gap::Infinite => true,
        }
    }
}

impl std::fmt::Display for Gap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Gap::Finite(g) => write!(f, "{g}"),
            Gap::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for Gap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Gap::Finite(g) => s.serialize_u64(*g),
            Gap::Infinite => s.serialize_str("infinite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntropyGapReport {
    pub gap: Gap,
    /// A saturated configuration that is not stable, does not split to a
    /// stable configuration, and is `gap` away from stability.
    pub witness: Option<Configuration>,
    /// False when the search ran out of budget; `gap` is then only an upper
    /// bound (or unknown, when no witness was found).
    pub exhaustive: bool,
}

/// Entropy gap of `tbn` given its exact optimum.
pub fn entropy_gap(tbn: &Tbn, report: &StableReport, node_budget: u64) -> Result<EntropyGapReport> {
    if !report.exact {
        return Err(TbnError::IncompleteOptima);
    }
    let (normalized, flipped) = tbn.normalize_polarity();
    let basis = basis_for(&normalized)?;
    let mut gap = entropy_gap_with_basis(&normalized, &basis, report.optimum, node_budget)?;
    if !flipped.is_empty() {
        gap.witness = gap.witness.map(|w| {
            Configuration::from_counts(w.iter().map(|(p, c)| {
                let back =
                    Polymer::from_counts(p.monomers().iter().map(|(m, k)| (m.flip_sites(&flipped), *k)))
                        .expect("non-empty");
                (back, c)
            }))
        });
    }
    Ok(gap)
}

/// As [`entropy_gap`], over a basis that must be exhaustive for `tbn`.
pub fn entropy_gap_with_basis(
    tbn: &Tbn,
    basis: &PolymerBasis,
    optimum: u64,
    node_budget: u64,
) -> Result<EntropyGapReport> {
    if !basis.is_exhaustive_for(tbn) {
        return Err(TbnError::InvalidArgument(
            "entropy gap needs a basis that is exhaustive for the TBN".to_string(),
        ));
    }
    let problem = Problem::new(tbn, basis.polymers(), &BTreeMap::new());
    let mut goal = Below { ceiling: optimum, best: None };
    let outcome = problem.runner(node_budget).run(&mut goal);
    let exhaustive = match outcome {
        Ok(()) => true,
        Err(e) if e.is_budget() => false,
        Err(e) => return Err(e),
    };
    Ok(match goal.best {
        Some((count, x)) => EntropyGapReport {
            gap: Gap::Finite(optimum - count),
            witness: Some(problem.configuration(&x)),
            exhaustive,
        },
        None => EntropyGapReport { gap: Gap::Infinite, witness: None, exhaustive },
    })
}

pub fn entropy_gap_default(tbn: &Tbn, report: &StableReport) -> Result<EntropyGapReport> {
    entropy_gap(tbn, report, DEFAULT_NODE_BUDGET)
}

/// Smallest configuration distance between a stable configuration of `t`
/// and one of `t_prime`.
pub fn tbn_distance(t_report: &StableReport, t_prime_report: &StableReport) -> Result<u64> {
    if !t_report.optima_complete || !t_prime_report.optima_complete {
        return Err(TbnError::IncompleteOptima);
    }
    t_report
        .all_optima
        .iter()
        .flat_map(|a| t_prime_report.all_optima.iter().map(move |b| config_distance(a, b)))
        .min()
        .ok_or(TbnError::IncompleteOptima)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::figure_examples;
    use crate::model::MonomerType;
    use crate::solver::solve;

    fn mono(label: &str, sites: &str) -> MonomerType {
        MonomerType::parse(Some(label), sites).unwrap()
    }

    #[test]
    fn figure_one_gap() {
        let ex = &figure_examples()["figure1"];
        let report = solve(&ex.tbn).unwrap();
        let gap = entropy_gap_default(&ex.tbn, &report).unwrap();
        assert_eq!(gap.gap, Gap::Finite(1));
        assert!(gap.exhaustive);
        assert_eq!(gap.witness.as_ref(), ex.configuration("two_polymers"));
    }

    #[test]
    fn pair_has_infinite_gap() {
        let tbn = Tbn::from_monomers([(mono("x", "a"), 1), (mono("y", "a*"), 1)]);
        let report = solve(&tbn).unwrap();
        let gap = entropy_gap_default(&tbn, &report).unwrap();
        assert_eq!(gap.gap, Gap::Infinite);
        assert!(gap.witness.is_none());
    }

    #[test]
    fn gap_ordering_and_display() {
        assert!(Gap::Finite(3) < Gap::Infinite);
        assert!(Gap::Infinite.at_least(100));
        assert!(!Gap::Finite(1).at_least(2));
        assert_eq!(Gap::Infinite.to_string(), "infinite");
        assert_eq!(serde_json::to_string(&Gap::Finite(2)).unwrap(), "2");
        assert_eq!(serde_json::to_string(&Gap::Infinite).unwrap(), "\"infinite\"");
    }

    #[test]
    fn distance_to_self_is_zero() {
        let ex = &figure_examples()["figure1"];
        let report = solve(&ex.tbn).unwrap();
        assert_eq!(tbn_distance(&report, &report).unwrap(), 0);
        let mut partial = report.clone();
        partial.optima_complete = false;
        assert_eq!(tbn_distance(&report, &partial), Err(TbnError::IncompleteOptima));
    }
}
