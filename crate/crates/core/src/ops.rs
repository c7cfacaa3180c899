//! Relations and metrics between configurations.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::error::{Result, TbnError};
use crate::model::{Configuration, MonomerType, Polymer, Tbn};

/// L1 distance between the polymer-count vectors of two configurations.
pub fn config_distance(alpha: &Configuration, beta: &Configuration) -> u64 {
    let keys: BTreeSet<&Polymer> = alpha.iter().chain(beta.iter()).map(|(p, _)| p).collect();
    keys.into_iter().map(|p| (alpha.count(p) as i64 - beta.count(p) as i64).unsigned_abs()).sum()
}

/// Whether `beta` is reachable from `alpha` by splitting polymers only, i.e.
/// the polymers of `beta` can be grouped so that each group merges into one
/// polymer of `alpha`.
pub fn splits_to(alpha: &Configuration, beta: &Configuration) -> Result<bool> {
    let ta = alpha.tbn();
    if !ta.same_monomers(&beta.tbn()) {
        return Err(TbnError::MonomerMismatch("configurations partition different TBNs".to_string()));
    }
    if beta.polymer_count() < alpha.polymer_count() {
        return Ok(false);
    }
    let index: BTreeMap<&MonomerType, usize> =
        ta.iter().filter(|(_, c)| *c > 0).enumerate().map(|(i, (m, _))| (m, i)).collect();
    let width = index.len();
    let vectorize = |p: &Polymer| -> Vec<u32> {
        let mut v = vec![0; width];
        for (m, c) in p.monomers() {
            v[index[m]] += c;
        }
        v
    };

    let mut alpha_parts: Vec<(u32, &Polymer)> = alpha.expanded().into_iter().map(|p| (p.size(), p)).collect();
    // largest first
    alpha_parts.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    let alpha_vecs: Vec<Vec<u32>> = alpha_parts.iter().map(|(_, p)| vectorize(p)).collect();

    let beta_vecs: Vec<Vec<u32>> = beta.iter().map(|(p, _)| vectorize(p)).collect();
    let beta_counts: Vec<u32> = beta.iter().map(|(_, c)| c).collect();

    let fits = |small: &[u32], big: &[u32]| small.iter().zip(big).all(|(s, b)| s <= b);
    for bv in &beta_vecs {
        if !alpha_vecs.iter().any(|av| fits(bv, av)) {
            return Ok(false);
        }
    }
    let candidates: Vec<Vec<usize>> = alpha_vecs
        .iter()
        .map(|av| (0..beta_vecs.len()).filter(|&j| fits(&beta_vecs[j], av)).collect())
        .collect();

    let mut search =
        SplitSearch { alpha: &alpha_vecs, beta: &beta_vecs, candidates: &candidates, failed: HashSet::new() };
    let mut remaining = beta_counts;
    Ok(search.assign(0, &mut remaining))
}

struct SplitSearch<'a> {
    alpha: &'a [Vec<u32>],
    beta: &'a [Vec<u32>],
    candidates: &'a [Vec<usize>],
    failed: HashSet<(usize, Vec<u32>)>,
}

impl SplitSearch<'_> {
    fn assign(&mut self, ai: usize, remaining: &mut Vec<u32>) -> bool {
        if ai == self.alpha.len() {
            return remaining.iter().all(|c| *c == 0);
        }
        let key = (ai, remaining.clone());
        if self.failed.contains(&key) {
            return false;
        }
        let mut residual = self.alpha[ai].clone();
        let ok = self.fill(ai, 0, &mut residual, remaining);
        if !ok {
            self.failed.insert(key);
        }
        ok
    }

    /// Chooses beta polymers (from `candidates[ai][ci..]`) summing to `residual`.
    fn fill(&mut self, ai: usize, ci: usize, residual: &mut Vec<u32>, remaining: &mut Vec<u32>) -> bool {
        if residual.iter().all(|r| *r == 0) {
            return self.assign(ai + 1, remaining);
        }
        let cands = self.candidates[ai].len();
        if ci == cands {
            return false;
        }
        let j = self.candidates[ai][ci];
        let bv = &self.beta[j];
        let max_fit = bv
            .iter()
            .zip(residual.iter())
            .filter(|(b, _)| **b > 0)
            .map(|(b, r)| r / b)
            .min()
            .unwrap_or(0)
            .min(remaining[j]);
        for take in (0..=max_fit).rev() {
            for (r, b) in residual.iter_mut().zip(bv) {
                *r -= b * take;
            }
            remaining[j] -= take;
            let ok = self.fill(ai, ci + 1, residual, remaining);
            remaining[j] += take;
            for (r, b) in residual.iter_mut().zip(bv) {
                *r += b * take;
            }
            if ok {
                return true;
            }
        }
        false
    }
}

/// Orders the polymers of `config` so that, for every site type, polymers with
/// an unstarred excess precede polymers with a starred excess. Returns `None`
/// when the binding graph has a cycle.
pub fn feed_forward_order(config: &Configuration) -> Option<Vec<Polymer>> {
    let polymers: Vec<&Polymer> = config.iter().map(|(p, _)| p).collect();
    let balances: Vec<BTreeMap<_, i64>> = polymers.iter().map(|p| p.balance()).collect();
    let n = polymers.len();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let binds =
                balances[i].iter().any(|(site, b)| *b > 0 && balances[j].get(site).is_some_and(|x| *x < 0));
            if binds {
                succ[i].push(j);
                indegree[j] += 1;
            }
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = ready.pop_first() {
        order.push(polymers[i].clone());
        for &j in &succ[i] {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                ready.insert(j);
            }
        }
    }
    (order.len() == n).then_some(order)
}

impl Tbn {
    pub fn is_feed_forward(&self) -> bool {
        feed_forward_order(&self.melt()).is_some()
    }
}
