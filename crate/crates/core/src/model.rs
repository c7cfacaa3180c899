//! Domain types: sites, monomers, TBNs, polymers and configurations.
//!
//! Every type keeps its contents in a canonical sorted order, so equal values
//! serialize identically and can be used as keys in ordered maps.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Result, TbnError};

/// Compares two run-length encoded sequences as if they were expanded.
fn cmp_expanded<T: Ord>(a: &[(T, u32)], b: &[(T, u32)]) -> Ordering {
    let mut ai = a.iter().flat_map(|(x, c)| std::iter::repeat_n(x, *c as usize));
    let mut bi = b.iter().flat_map(|(x, c)| std::iter::repeat_n(x, *c as usize));
    loop {
        match (ai.next(), bi.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) => match x.cmp(y) {
                Ordering::Equal => continue,
                other => return other,
            },
        }
    }
}

/// Sorts and merges `(item, count)` pairs, dropping zero counts.
fn normalize_runs<T: Ord>(items: impl IntoIterator<Item = (T, u32)>) -> Vec<(T, u32)> {
    let mut map: BTreeMap<T, u32> = BTreeMap::new();
    for (item, count) in items {
        if count > 0 {
            *map.entry(item).or_insert(0) += count;
        }
    }
    map.into_iter().collect()
}

pub(crate) fn valid_site_name(name: &str) -> bool {
    !name.is_empty()
        && !name.chars().any(|c| c.is_whitespace() || matches!(c, '*' | ':' | '#' | '(' | ')' | '{' | '}'))
}

/// A binding domain; `a*` binds `a`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SiteType {
    name: Arc<str>,
    starred: bool,
}

impl SiteType {
    pub fn new(name: &str, starred: bool) -> Result<Self> {
        if !valid_site_name(name) {
            return Err(TbnError::InvalidSite(name.to_string()));
        }
        Ok(SiteType { name: Arc::from(name), starred })
    }

    pub fn unstarred(name: &str) -> Result<Self> {
        Self::new(name, false)
    }

    pub fn starred(name: &str) -> Result<Self> {
        Self::new(name, true)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub(crate) fn name_arc(&self) -> &Arc<str> {
        &self.name
    }

    pub fn is_starred(&self) -> bool {
        self.starred
    }

    pub fn complement(&self) -> SiteType {
        SiteType { name: self.name.clone(), starred: !self.starred }
    }

    /// +1 for an unstarred site, -1 for a starred one.
    pub(crate) fn polarity(&self) -> i64 {
        if self.starred {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for SiteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.starred {
            write!(f, "{}*", self.name)
        } else {
            write!(f, "{}", self.name)
        }
    }
}

impl FromStr for SiteType {
    type Err = TbnError;

    fn from_str(s: &str) -> Result<Self> {
        match s.strip_suffix('*') {
            Some(name) => SiteType::starred(name),
            None => SiteType::unstarred(s),
        }
    }
}

/// A multiset of site types, optionally labelled. Labels do not take part in
/// equality, ordering or hashing.
#[derive(Debug, Clone)]
pub struct MonomerType {
    label: Option<String>,
    sites: Vec<(SiteType, u32)>,
}

impl MonomerType {
    pub fn new(label: Option<&str>, sites: impl IntoIterator<Item = SiteType>) -> Result<Self> {
        Self::from_counts(label, sites.into_iter().map(|s| (s, 1)))
    }

    pub fn from_counts(
        label: Option<&str>,
        sites: impl IntoIterator<Item = (SiteType, u32)>,
    ) -> Result<Self> {
        let sites = normalize_runs(sites);
        if sites.is_empty() {
            return Err(TbnError::EmptyMonomer);
        }
        if let Some(l) = label {
            if !valid_label(l) {
                return Err(TbnError::InvalidArgument(format!("invalid monomer label {l:?}")));
            }
        }
        Ok(MonomerType { label: label.map(str::to_string), sites })
    }

    /// Parses whitespace-separated sites such as `"a b* b*"`.
    pub fn parse(label: Option<&str>, sites: &str) -> Result<Self> {
        let sites = sites.split_whitespace().map(SiteType::from_str).collect::<Result<Vec<_>>>()?;
        Self::new(label, sites)
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: Option<&str>) -> Self {
        self.label = label.map(str::to_string);
        self
    }

    pub fn sites(&self) -> &[(SiteType, u32)] {
        &self.sites
    }

    pub fn total_sites(&self) -> u32 {
        self.sites.iter().map(|(_, c)| c).sum()
    }

    pub fn has_starred(&self) -> bool {
        self.sites.iter().any(|(s, _)| s.is_starred())
    }

    /// Unstarred minus starred copies, per site name.
    pub fn balance(&self) -> BTreeMap<Arc<str>, i64> {
        let mut out = BTreeMap::new();
        for (site, count) in &self.sites {
            *out.entry(site.name_arc().clone()).or_insert(0) += site.polarity() * *count as i64;
        }
        out
    }

    /// Label when present, otherwise the site list in parentheses.
    pub fn display_name(&self) -> String {
        match &self.label {
            Some(l) => l.clone(),
            None => format!("({})", self.site_string()),
        }
    }

    pub fn site_string(&self) -> String {
        let mut parts = Vec::new();
        for (site, count) in &self.sites {
            for _ in 0..*count {
                parts.push(site.to_string());
            }
        }
        parts.join(" ")
    }

    /// Swaps star polarity for every site whose name is in `names`.
    pub fn flip_sites(&self, names: &BTreeSet<Arc<str>>) -> MonomerType {
        let sites = normalize_runs(self.sites.iter().map(|(s, c)| {
            if names.contains(s.name_arc()) {
                (s.complement(), *c)
            } else {
                (s.clone(), *c)
            }
        }));
        MonomerType { label: self.label.clone(), sites }
    }
}

pub(crate) fn valid_label(label: &str) -> bool {
    !label.is_empty()
        && !label.chars().any(|c| c.is_whitespace() || matches!(c, ':' | '#' | '(' | ')' | '{' | '}'))
}

impl PartialEq for MonomerType {
    fn eq(&self, other: &Self) -> bool {
        self.sites == other.sites
    }
}

impl Eq for MonomerType {}

impl Hash for MonomerType {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.sites.hash(state);
    }
}

impl PartialOrd for MonomerType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MonomerType {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_expanded(&self.sites, &other.sites)
    }
}

impl fmt::Display for MonomerType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_name())
    }
}

/// A multiset of monomer types with counts.
///
/// Zero counts are allowed so that analyses can refer to monomer types that
/// are absent from one of two compared networks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tbn {
    monomers: BTreeMap<MonomerType, u32>,
}

impl Tbn {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_monomers(items: impl IntoIterator<Item = (MonomerType, u32)>) -> Self {
        let mut tbn = Tbn::new();
        for (m, c) in items {
            tbn.add(m, c);
        }
        tbn
    }

    /// Adds `count` copies. An existing equal monomer type keeps its label.
    pub fn add(&mut self, monomer: MonomerType, count: u32) {
        *self.monomers.entry(monomer).or_insert(0) += count;
    }

    /// This network plus one copy of `monomer`.
    pub fn with_added(&self, monomer: &MonomerType) -> Tbn {
        let mut out = self.clone();
        out.add(monomer.clone(), 1);
        out
    }

    pub fn count(&self, monomer: &MonomerType) -> u32 {
        self.monomers.get(monomer).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MonomerType, u32)> {
        self.monomers.iter().map(|(m, c)| (m, *c))
    }

    pub fn monomer_types(&self) -> impl Iterator<Item = &MonomerType> {
        self.monomers.keys()
    }

    pub fn num_monomer_types(&self) -> usize {
        self.monomers.values().filter(|c| **c > 0).count()
    }

    pub fn total_monomers(&self) -> u64 {
        self.monomers.values().map(|c| *c as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total_monomers() == 0
    }

    /// Looks a monomer type up by label.
    pub fn by_label(&self, label: &str) -> Option<&MonomerType> {
        self.monomers.keys().find(|m| m.label() == Some(label))
    }

    /// Distinct site names (unstarred form) used by any monomer type.
    pub fn site_names(&self) -> BTreeSet<Arc<str>> {
        self.monomers.keys().flat_map(|m| m.sites().iter().map(|(s, _)| s.name_arc().clone())).collect()
    }

    /// Total unstarred and starred copies per site name.
    pub fn site_totals(&self) -> BTreeMap<Arc<str>, (u64, u64)> {
        let mut out: BTreeMap<Arc<str>, (u64, u64)> = BTreeMap::new();
        for (m, c) in &self.monomers {
            for (site, k) in m.sites() {
                let e = out.entry(site.name_arc().clone()).or_insert((0, 0));
                let add = *c as u64 * *k as u64;
                if site.is_starred() {
                    e.1 += add;
                } else {
                    e.0 += add;
                }
            }
        }
        out
    }

    pub fn is_star_limiting(&self) -> bool {
        self.check_star_limiting().is_ok()
    }

    pub fn check_star_limiting(&self) -> Result<()> {
        for (site, (unstarred, starred)) in self.site_totals() {
            if starred > unstarred {
                return Err(TbnError::NotStarLimiting { site: site.to_string(), unstarred, starred });
            }
        }
        Ok(())
    }

    /// Renames site types so that the result is star-limiting, swapping star
    /// polarity of every site whose starred copies outnumber the unstarred
    /// ones. Returns the renamed network and the flipped site names.
    pub fn normalize_polarity(&self) -> (Tbn, BTreeSet<Arc<str>>) {
        let flipped: BTreeSet<Arc<str>> =
            self.site_totals().into_iter().filter(|(_, (u, s))| s > u).map(|(name, _)| name).collect();
        if flipped.is_empty() {
            return (self.clone(), flipped);
        }
        let tbn = Tbn::from_monomers(self.iter().map(|(m, c)| (m.flip_sites(&flipped), c)));
        (tbn, flipped)
    }

    /// The configuration in which every monomer is alone.
    pub fn melt(&self) -> Configuration {
        Configuration::from_counts(
            self.iter().filter(|(_, c)| *c > 0).map(|(m, c)| (Polymer::singleton(m.clone()), c)),
        )
    }

    /// Only monomer types with a positive count.
    pub fn present(&self) -> Tbn {
        Tbn {
            monomers: self.monomers.iter().filter(|(_, c)| **c > 0).map(|(m, c)| (m.clone(), *c)).collect(),
        }
    }

    /// Equality of the positive parts, ignoring zero-count entries.
    pub fn same_monomers(&self, other: &Tbn) -> bool {
        self.present() == other.present()
    }
}

/// A non-empty multiset of monomer types bound into one complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polymer {
    monomers: Vec<(MonomerType, u32)>,
}

impl Polymer {
    pub fn new(monomers: impl IntoIterator<Item = MonomerType>) -> Result<Self> {
        Self::from_counts(monomers.into_iter().map(|m| (m, 1)))
    }

    pub fn from_counts(monomers: impl IntoIterator<Item = (MonomerType, u32)>) -> Result<Self> {
        let monomers = normalize_runs(monomers);
        if monomers.is_empty() {
            return Err(TbnError::EmptyPolymer);
        }
        Ok(Polymer { monomers })
    }

    pub fn singleton(monomer: MonomerType) -> Self {
        Polymer { monomers: vec![(monomer, 1)] }
    }

    pub fn monomers(&self) -> &[(MonomerType, u32)] {
        &self.monomers
    }

    pub fn count(&self, monomer: &MonomerType) -> u32 {
        self.monomers.iter().find(|(m, _)| m == monomer).map(|(_, c)| *c).unwrap_or(0)
    }

    /// Number of monomers, with multiplicity.
    pub fn size(&self) -> u32 {
        self.monomers.iter().map(|(_, c)| c).sum()
    }

    pub fn merge(&self, other: &Polymer) -> Polymer {
        Polymer {
            monomers: normalize_runs(
                self.monomers.iter().chain(other.monomers.iter()).map(|(m, c)| (m.clone(), *c)),
            ),
        }
    }

    /// Unstarred minus starred copies, per site name.
    pub fn balance(&self) -> BTreeMap<Arc<str>, i64> {
        let mut out: BTreeMap<Arc<str>, i64> = BTreeMap::new();
        for (m, c) in &self.monomers {
            for (site, k) in m.sites() {
                *out.entry(site.name_arc().clone()).or_insert(0) +=
                    site.polarity() * (*k as i64) * (*c as i64);
            }
        }
        out
    }

    /// Whether `site` (given unstarred) is covered: starred copies within the
    /// polymer do not exceed unstarred ones.
    pub fn is_covered(&self, site: &SiteType) -> Result<bool> {
        if site.is_starred() {
            return Err(TbnError::StarredSite(site.to_string()));
        }
        Ok(self.balance().get(site.name()).copied().unwrap_or(0) >= 0)
    }

    /// Site names with more starred than unstarred copies.
    pub fn uncovered_sites(&self) -> Vec<Arc<str>> {
        self.balance().into_iter().filter(|(_, b)| *b < 0).map(|(n, _)| n).collect()
    }

    pub fn is_self_saturated(&self) -> bool {
        self.balance().values().all(|b| *b >= 0)
    }
}

impl PartialOrd for Polymer {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Polymer {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_expanded(&self.monomers, &other.monomers)
    }
}

impl fmt::Display for Polymer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (m, c) in &self.monomers {
            for _ in 0..*c {
                parts.push(m.display_name());
            }
        }
        write!(f, "{{ {} }}", parts.join(" "))
    }
}

/// A partition of a TBN's monomers into polymers, stored as polymer counts.
/// The partitioned network is recovered by summing the polymers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    polymers: BTreeMap<Polymer, u32>,
}

impl Configuration {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_counts(items: impl IntoIterator<Item = (Polymer, u32)>) -> Self {
        let mut polymers: BTreeMap<Polymer, u32> = BTreeMap::new();
        for (p, c) in items {
            if c > 0 {
                *polymers.entry(p).or_insert(0) += c;
            }
        }
        Configuration { polymers }
    }

    /// Builds a configuration and checks that it partitions `tbn` exactly.
    pub fn for_tbn(tbn: &Tbn, items: impl IntoIterator<Item = (Polymer, u32)>) -> Result<Self> {
        let config = Self::from_counts(items);
        let partitioned = config.tbn();
        if !partitioned.same_monomers(tbn) {
            return Err(TbnError::MonomerMismatch(
                "configuration does not partition the given TBN".to_string(),
            ));
        }
        Ok(config)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Polymer, u32)> {
        self.polymers.iter().map(|(p, c)| (p, *c))
    }

    pub fn count(&self, polymer: &Polymer) -> u32 {
        self.polymers.get(polymer).copied().unwrap_or(0)
    }

    pub fn polymer_count(&self) -> u64 {
        self.polymers.values().map(|c| *c as u64).sum()
    }

    pub fn num_polymer_types(&self) -> usize {
        self.polymers.len()
    }

    pub fn total_monomers(&self) -> u64 {
        self.polymers.iter().map(|(p, c)| p.size() as u64 * *c as u64).sum()
    }

    pub fn max_polymer_size(&self) -> u32 {
        self.polymers.keys().map(Polymer::size).max().unwrap_or(0)
    }

    /// The network this configuration partitions.
    pub fn tbn(&self) -> Tbn {
        let mut tbn = Tbn::new();
        for (p, c) in &self.polymers {
            for (m, k) in p.monomers() {
                tbn.add(m.clone(), k * c);
            }
        }
        tbn
    }

    pub fn is_saturated(&self) -> bool {
        self.polymers.keys().all(Polymer::is_self_saturated)
    }

    /// Merges needed to reach this configuration from the melt.
    pub fn merginess(&self) -> u64 {
        self.total_monomers() - self.polymer_count()
    }

    /// Polymers (with multiplicity) that have an uncovered site.
    pub fn starriness(&self) -> u64 {
        self.polymers.iter().filter(|(p, _)| !p.is_self_saturated()).map(|(_, c)| *c as u64).sum()
    }

    /// `optimum - polymer_count`, defined only for saturated configurations.
    pub fn distance_to_stability(&self, optimum: u64) -> Result<u64> {
        if !self.is_saturated() {
            return Err(TbnError::NotSaturated);
        }
        optimum.checked_sub(self.polymer_count()).ok_or_else(|| {
            TbnError::InvalidArgument(format!(
                "optimum {optimum} is below the polymer count {}",
                self.polymer_count()
            ))
        })
    }

    /// Polymers listed with multiplicity, in canonical order.
    pub fn expanded(&self) -> Vec<&Polymer> {
        self.polymers.iter().flat_map(|(p, c)| std::iter::repeat_n(p, *c as usize)).collect()
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, c) in &self.polymers {
            writeln!(f, "{c} * {p}")?;
        }
        Ok(())
    }
}
