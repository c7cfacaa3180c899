//! Stable configurations: exact search over the polymer basis, a brute-force
//! oracle, the feed-forward certificate, and lexicographic tie-breaking.

mod brute;
mod lp;
pub(crate) mod search;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::basis::{basis_for, PolymerBasis};
use crate::error::{Result, TbnError};
use crate::model::{Configuration, MonomerType, Polymer, Tbn};

pub use brute::{for_each_saturated, saturated_configurations, WalkLimits, DEFAULT_BRUTE_FORCE_CAP};
use search::{Maximize, Problem, Reach};

pub const DEFAULT_MAX_OPTIMA: usize = 10_000;
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    IpExact,
    FeedForwardMergeBound,
    BruteForce,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableReport {
    /// Largest polymer count of a saturated configuration; only a lower
    /// bound when `exact` is false.
    pub optimum: u64,
    pub exact: bool,
    pub all_optima: Vec<Configuration>,
    /// False when the optima list was truncated or the basis may be missing
    /// polymers.
    pub optima_complete: bool,
    pub lex_earliest: Configuration,
    pub certificate: Certificate,
}

impl StableReport {
    /// Whether the stable configuration is unique, when that is known.
    pub fn unique(&self) -> Option<bool> {
        (self.exact && self.optima_complete).then_some(self.all_optima.len() == 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    /// Largest allowed count per polymer; 0 excludes the polymer.
    pub upper_bounds: BTreeMap<Polymer, u32>,
    pub max_optima: usize,
    pub node_budget: u64,
    /// Tie-break order for `lex_earliest`; defaults to the polymers with an
    /// upper bound first, then canonical order.
    pub ordering: Option<Vec<Polymer>>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            upper_bounds: BTreeMap::new(),
            max_optima: DEFAULT_MAX_OPTIMA,
            node_budget: DEFAULT_NODE_BUDGET,
            ordering: None,
        }
    }
}

/// Solves `tbn` over `basis`. The result is exact when the basis is
/// exhaustive for `tbn`.
pub fn solve_stable(
    tbn: &Tbn,
    basis: &PolymerBasis,
    flip_bounds: Option<&BTreeMap<Polymer, u32>>,
) -> Result<StableReport> {
    let options =
        SolveOptions { upper_bounds: flip_bounds.cloned().unwrap_or_default(), ..SolveOptions::default() };
    solve_stable_with(tbn, basis, &options)
}

pub fn solve_stable_with(tbn: &Tbn, basis: &PolymerBasis, options: &SolveOptions) -> Result<StableReport> {
    let problem = Problem::new(tbn, basis.polymers(), &options.upper_bounds);
    let mut goal = Maximize::new(options.max_optima.max(1));
    problem.runner(options.node_budget).run(&mut goal)?;
    let Some(optimum) = goal.best else {
        return Err(TbnError::Internal("no saturated configuration over the given basis".to_string()));
    };
    let exact = basis.is_exhaustive_for(tbn);
    let ordering =
        options.ordering.clone().unwrap_or_else(|| default_ordering(basis.polymers(), &options.upper_bounds));
    let order = column_order(&problem, &ordering);

    let complete = !goal.truncated;
    let lex = if complete {
        lex_min(&goal.optima, &order)
    } else {
        lex_sequential(&problem, optimum, &order, options.node_budget)?
    };
    let mut all_optima: Vec<Configuration> = goal.optima.iter().map(|x| problem.configuration(x)).collect();
    all_optima.sort();
    Ok(StableReport {
        optimum,
        exact,
        all_optima,
        optima_complete: complete && exact,
        lex_earliest: problem.configuration(&lex),
        certificate: Certificate::IpExact,
    })
}

/// Enumerates the basis for `tbn` (after renaming sites so that starred
/// sites are limiting) and solves it exactly.
pub fn solve(tbn: &Tbn) -> Result<StableReport> {
    solve_with(tbn, &SolveOptions::default())
}

pub fn solve_with(tbn: &Tbn, options: &SolveOptions) -> Result<StableReport> {
    let (normalized, flipped) = tbn.normalize_polarity();
    if flipped.is_empty() {
        let basis = basis_for(tbn)?;
        return solve_stable_with(tbn, &basis, options);
    }
    let basis = basis_for(&normalized)?;
    let back: BTreeMap<MonomerType, MonomerType> =
        tbn.monomer_types().map(|m| (m.flip_sites(&flipped), m.clone())).collect();
    let rename_polymer = |p: &Polymer| {
        Polymer::from_counts(p.monomers().iter().map(|(m, c)| (back[m].clone(), *c))).expect("non-empty")
    };
    let rename =
        |c: &Configuration| Configuration::from_counts(c.iter().map(|(p, k)| (rename_polymer(p), k)));
    let forward = |p: &Polymer| {
        Polymer::from_counts(p.monomers().iter().map(|(m, c)| (m.flip_sites(&flipped), *c)))
            .expect("non-empty")
    };
    let options = SolveOptions {
        upper_bounds: options.upper_bounds.iter().map(|(p, b)| (forward(p), *b)).collect(),
        ordering: options.ordering.as_ref().map(|o| o.iter().map(forward).collect()),
        ..options.clone()
    };
    let report = solve_stable_with(&normalized, &basis, &options)?;
    let mut all_optima: Vec<Configuration> = report.all_optima.iter().map(rename).collect();
    all_optima.sort();
    Ok(StableReport { all_optima, lex_earliest: rename(&report.lex_earliest), ..report })
}

fn default_ordering(polymers: &[Polymer], bounded: &BTreeMap<Polymer, u32>) -> Vec<Polymer> {
    let mut first: Vec<Polymer> = polymers.iter().filter(|p| bounded.contains_key(p)).cloned().collect();
    first.extend(polymers.iter().filter(|p| !bounded.contains_key(p)).cloned());
    first
}

/// Column indices in tie-break order; columns missing from `ordering` follow
/// in canonical order.
fn column_order(problem: &Problem, ordering: &[Polymer]) -> Vec<usize> {
    let mut seen = vec![false; problem.columns.len()];
    let mut order = Vec::with_capacity(problem.columns.len());
    for p in ordering {
        if let Some(ci) = problem.column_of(p) {
            if !seen[ci] {
                seen[ci] = true;
                order.push(ci);
            }
        }
    }
    let mut rest: Vec<usize> = (0..seen.len()).filter(|&ci| !seen[ci]).collect();
    rest.sort_by(|a, b| problem.polymers[*a].cmp(&problem.polymers[*b]));
    order.extend(rest);
    order
}

fn lex_min(optima: &[Vec<u32>], order: &[usize]) -> Vec<u32> {
    optima
        .iter()
        .min_by(|a, b| {
            let ka = order.iter().map(|&c| a[c]);
            let kb = order.iter().map(|&c| b[c]);
            ka.cmp(kb)
        })
        .cloned()
        .expect("at least one optimum")
}

/// Fixes each column in turn to its smallest value that still admits a
/// solution with `optimum` polymers.
fn lex_sequential(problem: &Problem, optimum: u64, order: &[usize], budget: u64) -> Result<Vec<u32>> {
    let reach = |fixed: &[(usize, u32)]| -> Result<Option<Vec<u32>>> {
        let mut runner = problem.runner(budget);
        for (ci, v) in fixed {
            if !runner.fix(*ci, *v) {
                return Ok(None);
            }
            runner.freeze(*ci);
        }
        let mut goal = Reach { target: optimum, solution: None };
        runner.run(&mut goal)?;
        Ok(goal.solution)
    };
    let mut current = reach(&[])?.ok_or_else(|| TbnError::Internal("optimum not reachable".into()))?;
    let mut fixed: Vec<(usize, u32)> = Vec::new();
    for &ci in order {
        let mut chosen = current[ci];
        for v in 0..current[ci] {
            fixed.push((ci, v));
            let found = reach(&fixed)?;
            fixed.pop();
            if let Some(sol) = found {
                chosen = v;
                current = sol;
                break;
            }
        }
        fixed.push((ci, chosen));
    }
    Ok(current)
}

/// The lexicographically earliest stable configuration of `tbn` under
/// `ordering` (a permutation of the basis polymers).
pub fn lex_earliest(tbn: &Tbn, basis: &PolymerBasis, ordering: &[Polymer]) -> Result<Configuration> {
    let options = SolveOptions { ordering: Some(ordering.to_vec()), ..SolveOptions::default() };
    Ok(solve_stable_with(tbn, basis, &options)?.lex_earliest)
}

/// Ground truth by enumerating every saturated configuration; limited to
/// `DEFAULT_BRUTE_FORCE_CAP` monomers.
pub fn brute_force_stable(tbn: &Tbn) -> Result<StableReport> {
    brute_force_stable_with(tbn, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn brute_force_stable_with(tbn: &Tbn, monomer_cap: u64) -> Result<StableReport> {
    tbn.check_star_limiting()?;
    let mut best = 0u64;
    let mut optima: Vec<Configuration> = Vec::new();
    for_each_saturated(tbn, WalkLimits { monomer_cap, min_polymers: 0 }, |c| {
        let count = c.polymer_count();
        if count > best || optima.is_empty() {
            best = count;
            optima.clear();
        }
        if count == best {
            optima.push(c.clone());
        }
    })?;
    optima.sort();
    let lex_earliest =
        optima.first().cloned().ok_or_else(|| TbnError::Internal("no saturated configuration".into()))?;
    Ok(StableReport {
        optimum: best,
        exact: true,
        all_optima: optima,
        optima_complete: true,
        lex_earliest,
        certificate: Certificate::BruteForce,
    })
}

/// True when `config` is saturated and needs exactly as many merges as the
/// melt has starred monomers, which proves it stable in a feed-forward TBN.
pub fn certify_stable_feed_forward(config: &Configuration) -> Result<bool> {
    let tbn = config.tbn();
    if !tbn.is_feed_forward() {
        return Err(TbnError::NotFeedForward);
    }
    Ok(config.is_saturated() && config.merginess() == tbn.melt().starriness())
}
