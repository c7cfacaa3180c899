//! Polymer basis: the minimal self-saturated polymers over a TBN's monomer
//! types.
//!
//! A monomer type whose every site balance is non-negative is self-saturated
//! on its own, so any larger basis polymer contains at least one type with a
//! starred excess. Enumeration walks multisets of those "deficit" types and
//! completes each one with the minimal ways to repair its deficit from the
//! remaining types, then keeps the connected, unsplittable results.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigUint;

use crate::analysis::{polymer_size_bound, TbnStats};
use crate::error::{Result, TbnError};
use crate::layout::Layout;
use crate::model::{MonomerType, Polymer, Tbn};

pub const DEFAULT_SIZE_CAP: u32 = 20;
pub const DEFAULT_CANDIDATE_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolymerBasis {
    polymers: Vec<Polymer>,
    size_cap_used: u32,
    complete: bool,
    /// Per-type multiplicity limit used during enumeration.
    limits: BTreeMap<MonomerType, u32>,
}

impl PolymerBasis {
    pub fn polymers(&self) -> &[Polymer] {
        &self.polymers
    }

    pub fn len(&self) -> usize {
        self.polymers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polymers.is_empty()
    }

    pub fn contains(&self, polymer: &Polymer) -> bool {
        self.polymers.binary_search(polymer).is_ok()
    }

    pub fn size_cap_used(&self) -> u32 {
        self.size_cap_used
    }

    /// True when the size cap reached the theoretical polymer size bound.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Whether every basis polymer that fits inside `tbn` was enumerated, so
    /// that solving `tbn` over this basis is exact.
    pub fn is_exhaustive_for(&self, tbn: &Tbn) -> bool {
        self.complete
            || (self.size_cap_used as u64 >= tbn.total_monomers()
                && tbn
                    .iter()
                    .filter(|(_, c)| *c > 0)
                    .all(|(m, c)| self.limits.get(m).is_some_and(|l| *l >= c)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisOptions {
    pub size_cap: u32,
    /// Limit each type's multiplicity to its count in the TBN instead of the
    /// size cap.
    pub within_counts: bool,
    pub candidate_budget: u64,
}

impl Default for BasisOptions {
    fn default() -> Self {
        BasisOptions {
            size_cap: DEFAULT_SIZE_CAP,
            within_counts: false,
            candidate_budget: DEFAULT_CANDIDATE_BUDGET,
        }
    }
}

/// `min(theoretical bound, 20)`.
pub fn default_size_cap(tbn: &Tbn) -> u32 {
    let bound = polymer_size_bound(&TbnStats::of(tbn));
    if bound < BigUint::from(DEFAULT_SIZE_CAP) {
        u32::try_from(&bound).unwrap_or(DEFAULT_SIZE_CAP).max(1)
    } else {
        DEFAULT_SIZE_CAP
    }
}

/// All basis polymers with at most `size_cap` monomers.
pub fn enumerate_basis(tbn: &Tbn, size_cap: u32) -> Result<PolymerBasis> {
    enumerate_basis_with(tbn, &BasisOptions { size_cap, ..BasisOptions::default() })
}

/// The basis polymers that can occur in some configuration of `tbn`, which is
/// all a solver for `tbn` needs.
pub fn basis_for(tbn: &Tbn) -> Result<PolymerBasis> {
    enumerate_basis_with(
        tbn,
        &BasisOptions {
            size_cap: u32::try_from(tbn.total_monomers().max(1)).unwrap_or(u32::MAX),
            within_counts: true,
            ..BasisOptions::default()
        },
    )
}

pub fn enumerate_basis_with(tbn: &Tbn, options: &BasisOptions) -> Result<PolymerBasis> {
    tbn.check_star_limiting()?;
    enumerate_unchecked(tbn, options)
}

fn enumerate_unchecked(tbn: &Tbn, options: &BasisOptions) -> Result<PolymerBasis> {
    if options.size_cap == 0 {
        return Err(TbnError::InvalidArgument("size cap must be at least 1".into()));
    }
    let layout = Layout::new(tbn);
    let limits: Vec<u32> = if options.within_counts {
        layout.counts.iter().map(|c| (*c).min(options.size_cap)).collect()
    } else {
        vec![options.size_cap; layout.num_types()]
    };
    let vectors = enumerate_layout(&layout, &limits, options.size_cap, options.candidate_budget)?;
    let mut polymers: Vec<Polymer> = vectors.iter().map(|v| layout.polymer(v)).collect();
    polymers.sort();

    let bound = polymer_size_bound(&TbnStats::of(tbn));
    let reaches = |x: u32| BigUint::from(x) >= bound;
    let complete = reaches(options.size_cap) && limits.iter().all(|l| reaches(*l));
    Ok(PolymerBasis {
        polymers,
        size_cap_used: options.size_cap,
        complete,
        limits: layout.types.iter().cloned().zip(limits).collect(),
    })
}

/// Minimal self-saturated count vectors with `v[t] <= limits[t]` and total
/// size at most `cap`.
pub(crate) fn enumerate_layout(
    layout: &Layout,
    limits: &[u32],
    cap: u32,
    budget: u64,
) -> Result<BTreeSet<Vec<u32>>> {
    let n = layout.num_types();
    let d = layout.num_sites();
    let (plain, deficit): (Vec<usize>, Vec<usize>) =
        (0..n).filter(|&t| limits[t] > 0).partition(|&t| layout.is_unstarred_like(t));

    let suppliers: Vec<Vec<usize>> =
        (0..d).map(|s| plain.iter().copied().filter(|&t| layout.net[t][s] > 0).collect()).collect();

    // suffix_supply[i][s]: most unstarred excess on `s` obtainable from
    // deficit types i.. and all plain types
    let mut suffix_supply = vec![vec![0i64; d]; deficit.len() + 1];
    for &t in &plain {
        for s in 0..d {
            suffix_supply[deficit.len()][s] += layout.net[t][s].max(0) * limits[t] as i64;
        }
    }
    for i in (0..deficit.len()).rev() {
        let t = deficit[i];
        for s in 0..d {
            suffix_supply[i][s] = suffix_supply[i + 1][s] + layout.net[t][s].max(0) * limits[t] as i64;
        }
    }

    let mut walker = Walker {
        layout,
        limits,
        cap,
        budget,
        visited: 0,
        deficit: &deficit,
        suppliers,
        suffix_supply,
        found: BTreeSet::new(),
    };
    for &t in &plain {
        let mut v = vec![0; n];
        v[t] = 1;
        walker.found.insert(v);
    }
    let mut v = vec![0u32; n];
    let mut bal = vec![0i64; d];
    walker.walk(0, &mut v, &mut bal, 0)?;
    Ok(walker.found)
}

struct Walker<'a> {
    layout: &'a Layout,
    limits: &'a [u32],
    cap: u32,
    budget: u64,
    visited: u64,
    deficit: &'a [usize],
    suppliers: Vec<Vec<usize>>,
    suffix_supply: Vec<Vec<i64>>,
    found: BTreeSet<Vec<u32>>,
}

impl Walker<'_> {
    fn tick(&mut self) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(TbnError::BudgetExceeded { what: "basis candidate", limit: self.budget });
        }
        Ok(())
    }

    fn walk(&mut self, i: usize, v: &mut Vec<u32>, bal: &mut [i64], size: u32) -> Result<()> {
        if bal.iter().zip(&self.suffix_supply[i]).any(|(b, supply)| b + supply < 0) {
            return Ok(());
        }
        if i == self.deficit.len() {
            if size > 0 {
                self.tick()?;
                if self.can_connect(v) {
                    self.complete_leaf(v, bal, size)?;
                }
            }
            return Ok(());
        }
        let t = self.deficit[i];
        let most = self.limits[t].min(self.cap - size);
        for c in 0..=most {
            if c > 0 {
                v[t] += 1;
                add(bal, &self.layout.net[t], 1);
            }
            self.walk(i + 1, v, bal, size + c)?;
        }
        v[t] = 0;
        add(bal, &self.layout.net[t], -(most as i64));
        Ok(())
    }

    /// Whether the deficit types in `core` fall into one component when every
    /// supplier type is available to bridge them. A completion's binding
    /// graph is a subgraph of this one.
    fn can_connect(&self, core: &[u32]) -> bool {
        let present: Vec<usize> = self.deficit.iter().copied().filter(|&t| core[t] > 0).collect();
        if present.len() <= 1 {
            return true;
        }
        let net = &self.layout.net;
        let open: Vec<usize> =
            (0..self.layout.num_sites()).filter(|&s| present.iter().any(|&t| net[t][s] < 0)).collect();
        // nodes: present deficit types, then each open site
        let mut parent: Vec<usize> = (0..present.len() + open.len()).collect();
        let site_node = |j: usize| present.len() + j;
        for (i, &t) in present.iter().enumerate() {
            for (j, &s) in open.iter().enumerate() {
                if net[t][s] != 0 {
                    union(&mut parent, i, site_node(j));
                }
            }
        }
        for j in 0..open.len() {
            for &u in &self.suppliers[open[j]] {
                for (j2, &s2) in open.iter().enumerate().skip(j + 1) {
                    if net[u][s2] > 0 {
                        union(&mut parent, site_node(j), site_node(j2));
                    }
                }
            }
        }
        let root = find(&mut parent, 0);
        (1..present.len()).all(|i| find(&mut parent, i) == root)
    }

    /// Adds every minimal repair of the deficit in `core` and records the
    /// resulting polymers that are minimal.
    fn complete_leaf(&mut self, core: &[u32], bal: &[i64], size: u32) -> Result<()> {
        let mut seen = HashSet::new();
        let mut repairs = Vec::new();
        let mut extra = vec![0u32; core.len()];
        let mut bal = bal.to_vec();
        self.repair(&mut extra, &mut bal, size, &mut seen, &mut repairs)?;
        for extra in repairs {
            let p: Vec<u32> = core.iter().zip(&extra).map(|(a, b)| a + b).collect();
            if self.found.contains(&p) {
                continue;
            }
            if is_minimal(self.layout, &p) {
                self.found.insert(p);
            }
        }
        Ok(())
    }

    fn repair(
        &mut self,
        extra: &mut Vec<u32>,
        bal: &mut Vec<i64>,
        size: u32,
        seen: &mut HashSet<Vec<u32>>,
        out: &mut Vec<Vec<u32>>,
    ) -> Result<()> {
        if !seen.insert(extra.clone()) {
            return Ok(());
        }
        let Some(site) = bal.iter().position(|b| *b < 0) else {
            out.push(extra.clone());
            return Ok(());
        };
        if size == self.cap {
            return Ok(());
        }
        self.tick()?;
        for k in 0..self.suppliers[site].len() {
            let t = self.suppliers[site][k];
            if extra[t] < self.limits[t] {
                extra[t] += 1;
                add(bal, &self.layout.net[t], 1);
                self.repair(extra, bal, size + 1, seen, out)?;
                add(bal, &self.layout.net[t], -1);
                extra[t] -= 1;
            }
        }
        Ok(())
    }
}

fn add(bal: &mut [i64], net: &[i64], times: i64) {
    for (b, n) in bal.iter_mut().zip(net) {
        *b += n * times;
    }
}

/// Self-saturated and not splittable into two self-saturated parts.
pub(crate) fn is_minimal(layout: &Layout, p: &[u32]) -> bool {
    let bal = layout.balance(p);
    if bal.iter().any(|b| *b < 0) {
        return false;
    }
    let present: Vec<usize> = (0..p.len()).filter(|&t| p[t] > 0).collect();
    if present.len() == 1 && p[present[0]] == 1 {
        return true;
    }
    // a removable single monomer is the most common split
    if present.iter().any(|&t| layout.net[t].iter().zip(&bal).all(|(n, b)| *n >= 0 && b - n >= 0)) {
        return false;
    }
    if components(layout, &present) > 1 {
        return false;
    }
    !has_split(layout, p, &present, &bal)
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    parent[ra] = rb;
}

/// Connected components of the types in a polymer, joining types that hold
/// opposite excesses of some site.
fn components(layout: &Layout, present: &[usize]) -> usize {
    let mut parent: Vec<usize> = (0..present.len()).collect();
    for s in 0..layout.num_sites() {
        let touching: Vec<usize> = (0..present.len()).filter(|&i| layout.net[present[i]][s] != 0).collect();
        if touching.iter().any(|&i| layout.net[present[i]][s] < 0) {
            for w in touching.windows(2) {
                union(&mut parent, w[0], w[1]);
            }
        }
    }
    (0..present.len()).filter(|&i| find(&mut parent, i) == i).count()
}

/// Searches for a proper non-empty part `q` with `0 <= bal(q) <= bal(p)`.
fn has_split(layout: &Layout, p: &[u32], present: &[usize], bal: &[i64]) -> bool {
    let sites: Vec<usize> =
        (0..layout.num_sites()).filter(|&s| present.iter().any(|&t| layout.net[t][s] != 0)).collect();
    let k = present.len();
    let mut lo = vec![vec![0i64; sites.len()]; k + 1];
    let mut hi = vec![vec![0i64; sites.len()]; k + 1];
    for i in (0..k).rev() {
        let t = present[i];
        for (j, &s) in sites.iter().enumerate() {
            let x = layout.net[t][s] * p[t] as i64;
            lo[i][j] = lo[i + 1][j] + x.min(0);
            hi[i][j] = hi[i + 1][j] + x.max(0);
        }
    }
    let target: Vec<i64> = sites.iter().map(|&s| bal[s]).collect();
    let nets: Vec<Vec<i64>> =
        present.iter().map(|&t| sites.iter().map(|&s| layout.net[t][s]).collect()).collect();
    let counts: Vec<u32> = present.iter().map(|&t| p[t]).collect();
    let total: u32 = counts.iter().sum();

    struct Split<'a> {
        nets: &'a [Vec<i64>],
        counts: &'a [u32],
        lo: &'a [Vec<i64>],
        hi: &'a [Vec<i64>],
        target: &'a [i64],
        total: u32,
    }
    impl Split<'_> {
        fn go(&self, i: usize, q: &mut [i64], taken: u32) -> bool {
            for j in 0..q.len() {
                if q[j] + self.hi[i][j] < 0 || q[j] + self.lo[i][j] > self.target[j] {
                    return false;
                }
            }
            if i == self.counts.len() {
                return taken > 0 && taken < self.total;
            }
            // the part holding a copy of the first type can always be chosen
            let first = if i == 0 { 1 } else { 0 };
            for c in first..=self.counts[i] {
                for (x, n) in q.iter_mut().zip(&self.nets[i]) {
                    *x += n * c as i64;
                }
                let ok = self.go(i + 1, q, taken + c);
                for (x, n) in q.iter_mut().zip(&self.nets[i]) {
                    *x -= n * c as i64;
                }
                if ok {
                    return true;
                }
            }
            false
        }
    }
    let search = Split { nets: &nets, counts: &counts, lo: &lo, hi: &hi, target: &target, total };
    search.go(0, &mut vec![0; sites.len()], 0)
}

/// The union of the bases of `T` and `T' = T + a`, each taken over the
/// monomer types of `T'` in its own star-limiting polarity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergedBasis {
    pub basis: PolymerBasis,
    pub added: MonomerType,
    pub in_t: BTreeSet<Polymer>,
    pub in_t_prime: BTreeSet<Polymer>,
    /// Polymers in exactly one of the two bases, with the largest count they
    /// can have in a saturated configuration of the network whose basis holds
    /// them.
    pub flip_constrained: BTreeMap<Polymer, u32>,
}

impl MergedBasis {
    /// Per-polymer upper bounds for solving `T` over the merged basis.
    pub fn bounds_for_t(&self) -> BTreeMap<Polymer, u32> {
        self.bounds(&self.in_t)
    }

    pub fn bounds_for_t_prime(&self) -> BTreeMap<Polymer, u32> {
        self.bounds(&self.in_t_prime)
    }

    fn bounds(&self, own: &BTreeSet<Polymer>) -> BTreeMap<Polymer, u32> {
        self.flip_constrained.iter().map(|(p, b)| (p.clone(), if own.contains(p) { *b } else { 0 })).collect()
    }
}

/// The monomer type added to `t` to obtain `t_prime`, if there is exactly one.
pub fn added_monomer(t: &Tbn, t_prime: &Tbn) -> Result<MonomerType> {
    let mut added = None;
    let types: BTreeSet<&MonomerType> = t.monomer_types().chain(t_prime.monomer_types()).collect();
    for m in types {
        let (a, b) = (t.count(m), t_prime.count(m));
        if b == a + 1 && added.is_none() {
            added = Some(m.clone());
        } else if a != b {
            added = None;
            break;
        }
    }
    added.ok_or_else(|| TbnError::MonomerMismatch("second TBN is not the first plus one monomer".to_string()))
}

pub fn merged_basis(t: &Tbn, t_prime: &Tbn, size_cap: u32) -> Result<MergedBasis> {
    merged_basis_with(t, t_prime, &BasisOptions { size_cap, ..BasisOptions::default() })
}

/// With `within_counts`, multiplicities are limited by the counts of `t_prime`.
pub fn merged_basis_with(t: &Tbn, t_prime: &Tbn, options: &BasisOptions) -> Result<MergedBasis> {
    t.check_star_limiting()?;
    let added = added_monomer(t, t_prime)?;

    let own = enumerate_unchecked(t_prime, options)?;
    let (normalized, flipped) = t_prime.normalize_polarity();
    let other = if flipped.is_empty() {
        own.clone()
    } else {
        let b = enumerate_unchecked(&normalized, options)?;
        let relabel: BTreeMap<MonomerType, MonomerType> =
            t_prime.monomer_types().map(|m| (m.flip_sites(&flipped), m.clone())).collect();
        let polymers = b
            .polymers
            .iter()
            .map(|p| {
                Polymer::from_counts(p.monomers().iter().map(|(m, c)| (relabel[m].clone(), *c)))
                    .expect("non-empty")
            })
            .collect();
        PolymerBasis {
            polymers,
            limits: b.limits.iter().map(|(m, l)| (relabel[m].clone(), *l)).collect(),
            ..b
        }
    };

    let in_t: BTreeSet<Polymer> = own.polymers.iter().cloned().collect();
    let in_t_prime: BTreeSet<Polymer> = other.polymers.iter().cloned().collect();
    let bound = added.total_sites();
    let flip_constrained = in_t.symmetric_difference(&in_t_prime).map(|p| (p.clone(), bound)).collect();
    let union: BTreeSet<Polymer> = in_t.union(&in_t_prime).cloned().collect();
    Ok(MergedBasis {
        basis: PolymerBasis {
            polymers: union.into_iter().collect(),
            size_cap_used: own.size_cap_used,
            complete: own.complete && other.complete,
            limits: own.limits,
        },
        added,
        in_t,
        in_t_prime,
        flip_constrained,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(label: &str, sites: &str) -> MonomerType {
        MonomerType::parse(Some(label), sites).unwrap()
    }

    fn poly(ms: &[&MonomerType]) -> Polymer {
        Polymer::new(ms.iter().map(|m| (*m).clone())).unwrap()
    }

    #[test]
    fn pair_basis() {
        let a = mono("x", "a");
        let s = mono("y", "a*");
        let tbn = Tbn::from_monomers([(a.clone(), 1), (s.clone(), 1)]);
        let basis = enumerate_basis(&tbn, 10).unwrap();
        assert_eq!(basis.polymers(), &[poly(&[&a]), poly(&[&a, &s])]);
        // bound 2(2+1)(1*1)^5 = 6
        assert!(basis.is_complete());
        assert!(!enumerate_basis(&tbn, 5).unwrap().is_complete());
        assert!(basis.is_exhaustive_for(&tbn));
    }

    #[test]
    fn starred_alone_is_rejected() {
        let tbn = Tbn::from_monomers([(mono("y", "a*"), 1)]);
        assert!(matches!(enumerate_basis(&tbn, 5), Err(TbnError::NotStarLimiting { .. })));
    }

    #[test]
    fn multi_copy_basis_member() {
        // {a*, a*} needs two copies of {a}
        let a = mono("x", "a");
        let s = mono("y", "a* a*");
        let tbn = Tbn::from_monomers([(a.clone(), 2), (s.clone(), 1)]);
        let basis = enumerate_basis(&tbn, 4).unwrap();
        assert_eq!(basis.polymers(), &[poly(&[&a]), poly(&[&a, &a, &s])]);
    }

    #[test]
    fn size_one_bound_is_complete() {
        let tbn = Tbn::from_monomers([(mono("x", "a"), 1)]);
        let basis = enumerate_basis(&tbn, 4).unwrap();
        assert!(basis.is_complete());
        assert_eq!(default_size_cap(&tbn), 4);
    }

    #[test]
    fn splittable_polymer_excluded() {
        let a = mono("x", "a");
        let b = mono("z", "b");
        let sa = mono("y", "a*");
        let sb = mono("w", "b*");
        let ab = mono("v", "a b");
        let tbn = Tbn::from_monomers([(a, 1), (b, 1), (sa.clone(), 1), (sb.clone(), 1), (ab.clone(), 1)]);
        let basis = basis_for(&tbn).unwrap();
        // {a* b* (a b)} is minimal, but {a* b* (a b) a} is not
        assert!(basis.contains(&poly(&[&sa, &sb, &ab])));
        assert!(basis.polymers().iter().all(|p| p.size() <= 3));
    }

    #[test]
    fn merged_basis_without_flip() {
        let t = Tbn::from_monomers([(mono("x", "a"), 2)]);
        let tp = t.with_added(&mono("y", "a b"));
        let merged = merged_basis(&t, &tp, 6).unwrap();
        assert!(merged.flip_constrained.is_empty());
        assert_eq!(merged.added, mono("y", "a b"));
    }

    #[test]
    fn merged_basis_with_flip() {
        let a = mono("x", "a");
        let s = mono("y", "a*");
        let ss = mono("z", "a* a*");
        let t = Tbn::from_monomers([(a.clone(), 2), (s.clone(), 1)]);
        let tp = t.with_added(&ss);
        let merged = merged_basis(&t, &tp, 6).unwrap();
        // after the flip a* is the unstarred side: {a*} and {a* a*} stand alone
        // while {a} needs a partner
        assert!(merged.in_t.contains(&poly(&[&a])));
        assert!(!merged.in_t_prime.contains(&poly(&[&a])));
        assert!(merged.in_t_prime.contains(&poly(&[&s])));
        assert!(merged.in_t_prime.contains(&poly(&[&ss])));
        assert!(merged.in_t.contains(&poly(&[&a, &s])));
        assert!(merged.in_t_prime.contains(&poly(&[&a, &s])));
        assert_eq!(merged.flip_constrained.get(&poly(&[&ss])), Some(&2));
        assert_eq!(merged.bounds_for_t().get(&poly(&[&ss])), Some(&0));
        assert_eq!(merged.bounds_for_t_prime().get(&poly(&[&a])), Some(&0));
        assert!(!merged.flip_constrained.contains_key(&poly(&[&a, &s])));
    }

    #[test]
    fn merged_basis_requires_one_added_monomer() {
        let t = Tbn::from_monomers([(mono("x", "a"), 2)]);
        let tp = Tbn::from_monomers([(mono("x", "a"), 4)]);
        assert!(merged_basis(&t, &tp, 4).is_err());
        assert!(merged_basis(&t, &t, 4).is_err());
    }
}
