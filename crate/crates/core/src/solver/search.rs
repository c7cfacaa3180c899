//! Depth-first search over polymer counts with monomer conservation.
//!
//! The search repeatedly takes the first monomer type (in a fixed order) that
//! still has copies left and chooses a column containing it. Columns chosen
//! for the same pivot are taken in nondecreasing order, so every solution is
//! reached exactly once.

use std::collections::BTreeMap;

use crate::error::{Result, TbnError};
use crate::layout::Layout;
use crate::model::{Configuration, Polymer, Tbn};

use super::lp::{dual_weights, DualWeights};

#[derive(Debug, Clone)]
pub(crate) struct Column {
    pub entries: Vec<(usize, u32)>,
    pub size: u32,
    pub upper: u32,
}

#[derive(Debug, Clone)]
pub(crate) struct Problem {
    pub layout: Layout,
    pub polymers: Vec<Polymer>,
    pub columns: Vec<Column>,
    /// Monomer types in pivot order.
    order: Vec<usize>,
    /// Columns containing each type, smallest polymers first.
    by_type: Vec<Vec<usize>>,
    dual: Option<DualWeights>,
}

impl Problem {
    /// Columns are the given polymers that fit inside `tbn`; `upper` caps the
    /// count of individual polymers, and a cap of 0 removes the polymer.
    pub fn new(tbn: &Tbn, polymers: &[Polymer], upper: &BTreeMap<Polymer, u32>) -> Problem {
        let layout = Layout::new(&tbn.present());
        let mut kept = Vec::new();
        let mut columns = Vec::new();
        for p in polymers {
            let Some(v) = layout.vector(p) else { continue };
            let most =
                v.iter().zip(&layout.counts).filter(|(c, _)| **c > 0).map(|(c, t)| t / c).min().unwrap_or(0);
            let most = upper.get(p).map_or(most, |u| most.min(*u));
            if most == 0 {
                continue;
            }
            let entries: Vec<(usize, u32)> =
                v.iter().enumerate().filter(|(_, c)| **c > 0).map(|(t, c)| (t, *c)).collect();
            columns.push(Column { size: p.size(), entries, upper: most });
            kept.push(p.clone());
        }

        let n = layout.num_types();
        let mut by_type: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (ci, col) in columns.iter().enumerate() {
            for (t, _) in &col.entries {
                by_type[*t].push(ci);
            }
        }
        for list in &mut by_type {
            list.sort_by_key(|&ci| (columns[ci].size, ci));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&t| (by_type[t].len(), t));

        let sparse: Vec<Vec<(usize, u32)>> = columns.iter().map(|c| c.entries.clone()).collect();
        let dual = dual_weights(&sparse, &layout.counts);
        Problem { layout, polymers: kept, columns, order, by_type, dual }
    }

    pub fn configuration(&self, x: &[u32]) -> Configuration {
        Configuration::from_counts(
            x.iter().enumerate().filter(|(_, c)| **c > 0).map(|(i, c)| (self.polymers[i].clone(), *c)),
        )
    }

    pub fn column_of(&self, polymer: &Polymer) -> Option<usize> {
        self.polymers.iter().position(|p| p == polymer)
    }

    pub fn total(&self) -> u64 {
        self.layout.counts.iter().map(|c| *c as u64).sum()
    }

    pub fn runner(&self, budget: u64) -> Runner<'_> {
        let rem = self.layout.counts.clone();
        let dot =
            self.dual.as_ref().map_or(0, |d| rem.iter().zip(&d.weights).map(|(r, w)| *r as i64 * w).sum());
        Runner {
            problem: self,
            rem_total: self.total(),
            rem,
            x: vec![0; self.columns.len()],
            limit: self.columns.iter().map(|c| c.upper).collect(),
            count: 0,
            dot,
            nodes: 0,
            budget,
        }
    }
}

/// What the search is looking for.
pub(crate) trait Goal {
    /// Whether a subtree whose best reachable count is `bound` can matter.
    fn wants(&self, bound: u64) -> bool;
    /// Called at each complete solution; returns true to stop the search.
    fn found(&mut self, count: u64, x: &[u32]) -> bool;
}

pub(crate) struct Runner<'a> {
    problem: &'a Problem,
    rem: Vec<u32>,
    rem_total: u64,
    x: Vec<u32>,
    limit: Vec<u32>,
    count: u64,
    dot: i64,
    nodes: u64,
    budget: u64,
}

impl Runner<'_> {
    /// Pre-assigns `times` copies of a column; false if they do not fit.
    pub fn fix(&mut self, column: usize, times: u32) -> bool {
        let col = &self.problem.columns[column];
        if self.x[column] + times > self.limit[column]
            || col.entries.iter().any(|(t, c)| self.rem[*t] < c * times)
        {
            return false;
        }
        for _ in 0..times {
            self.apply(column);
        }
        true
    }

    /// Forbids any further copies of a column.
    pub fn freeze(&mut self, column: usize) {
        self.limit[column] = self.x[column];
    }

    pub fn run(&mut self, goal: &mut dyn Goal) -> Result<()> {
        self.dfs(0, usize::MAX, 0, goal).map(|_| ())
    }

    fn bound(&self) -> u64 {
        let mut b = self.rem_total;
        if self.problem.dual.is_some() {
            b = b.min(DualWeights::bound(self.dot).max(0) as u64);
        }
        self.count + b
    }

    fn apply(&mut self, ci: usize) {
        let col = &self.problem.columns[ci];
        for (t, c) in &col.entries {
            self.rem[*t] -= c;
        }
        if let Some(d) = &self.problem.dual {
            self.dot -= col.entries.iter().map(|(t, c)| d.weights[*t] * *c as i64).sum::<i64>();
        }
        self.rem_total -= col.size as u64;
        self.x[ci] += 1;
        self.count += 1;
    }

    fn undo(&mut self, ci: usize) {
        let col = &self.problem.columns[ci];
        for (t, c) in &col.entries {
            self.rem[*t] += c;
        }
        if let Some(d) = &self.problem.dual {
            self.dot += col.entries.iter().map(|(t, c)| d.weights[*t] * *c as i64).sum::<i64>();
        }
        self.rem_total += col.size as u64;
        self.x[ci] -= 1;
        self.count -= 1;
    }

    fn fits(&self, ci: usize) -> bool {
        let col = &self.problem.columns[ci];
        self.x[ci] < self.limit[ci] && col.entries.iter().all(|(t, c)| self.rem[*t] >= *c)
    }

    fn dfs(&mut self, pos: usize, parent_pos: usize, min_ci: usize, goal: &mut dyn Goal) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(TbnError::BudgetExceeded { what: "search node", limit: self.budget });
        }
        let order = &self.problem.order;
        let mut pos = pos;
        while pos < order.len() && self.rem[order[pos]] == 0 {
            pos += 1;
        }
        if pos == order.len() {
            return Ok(goal.found(self.count, &self.x));
        }
        if !goal.wants(self.bound()) {
            return Ok(false);
        }
        let pivot = order[pos];
        let start = if pos == parent_pos { min_ci } else { 0 };
        for k in start..self.problem.by_type[pivot].len() {
            let ci = self.problem.by_type[pivot][k];
            if !self.fits(ci) {
                continue;
            }
            self.apply(ci);
            let stop = self.dfs(pos, pos, k, goal);
            self.undo(ci);
            if stop? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Maximum count with every maximizer, up to `cap` of them.
pub(crate) struct Maximize {
    pub best: Option<u64>,
    pub optima: Vec<Vec<u32>>,
    pub cap: usize,
    pub truncated: bool,
}

impl Maximize {
    pub fn new(cap: usize) -> Self {
        Maximize { best: None, optima: Vec::new(), cap, truncated: false }
    }
}

impl Goal for Maximize {
    fn wants(&self, bound: u64) -> bool {
        match self.best {
            None => true,
            Some(b) if self.truncated => bound > b,
            Some(b) => bound >= b,
        }
    }

    fn found(&mut self, count: u64, x: &[u32]) -> bool {
        match self.best {
            Some(b) if count < b => {}
            Some(b) if count == b => {
                if self.optima.len() < self.cap {
                    self.optima.push(x.to_vec());
                } else {
                    self.truncated = true;
                }
            }
            _ => {
                self.best = Some(count);
                self.optima = vec![x.to_vec()];
                self.truncated = false;
            }
        }
        false
    }
}

/// Any solution with exactly `target` polymers.
pub(crate) struct Reach {
    pub target: u64,
    pub solution: Option<Vec<u32>>,
}

impl Goal for Reach {
    fn wants(&self, bound: u64) -> bool {
        bound >= self.target
    }

    fn found(&mut self, count: u64, x: &[u32]) -> bool {
        if count == self.target {
            self.solution = Some(x.to_vec());
            return true;
        }
        false
    }
}

/// Largest count strictly below `ceiling`.
pub(crate) struct Below {
    pub ceiling: u64,
    pub best: Option<(u64, Vec<u32>)>,
}

impl Goal for Below {
    fn wants(&self, bound: u64) -> bool {
        match &self.best {
            None => true,
            Some((b, _)) => bound > *b,
        }
    }

    fn found(&mut self, count: u64, x: &[u32]) -> bool {
        if count < self.ceiling && self.best.as_ref().is_none_or(|(b, _)| count > *b) {
            self.best = Some((count, x.to_vec()));
            // nothing can beat ceiling - 1
            return count + 1 == self.ceiling;
        }
        false
    }
}
