//! The amplifier TBN families and their reference configurations.
//!
//! Domains are triples `(layer, row, col)`, written `d_i_j_l`, with a `_p`
//! suffix for the primed copies used by the converging half.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Result, TbnError};
use crate::model::{Configuration, MonomerType, Polymer, SiteType, Tbn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct AmplifierSpec {
    pub n: u32,
    pub k: u32,
    pub with_analyte: bool,
    pub with_translators: bool,
}

impl AmplifierSpec {
    pub fn new(n: u32, k: u32, with_analyte: bool, with_translators: bool) -> Result<Self> {
        let spec = AmplifierSpec { n, k, with_analyte, with_translators };
        spec.validate()?;
        Ok(spec)
    }

    pub fn plain(n: u32, k: u32) -> Result<Self> {
        Self::new(n, k, false, false)
    }

    pub fn analyte(n: u32, k: u32) -> Result<Self> {
        Self::new(n, k, true, false)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.k < 2 {
            return Err(TbnError::InvalidArgument(format!(
                "amplifier needs n >= 1 and k >= 2, got n = {}, k = {}",
                self.n, self.k
            )));
        }
        // 2^(n-1) copies and k^2 sites per monomer must stay small
        if self.n > 20 || self.k > 64 {
            return Err(TbnError::InvalidArgument(format!(
                "amplifier parameters too large: n = {}, k = {}",
                self.n, self.k
            )));
        }
        Ok(())
    }

    pub fn with_analyte(self, with_analyte: bool) -> Self {
        AmplifierSpec { with_analyte, ..self }
    }

    /// Number of payoff monomers `p_j`.
    pub fn payoff_count(&self) -> u32 {
        self.k.div_ceil(2)
    }

    /// Monomer type count: `4nk + 1 + ceil(k/2)`, plus the analyte and the
    /// translators when present.
    pub fn expected_monomer_types(&self) -> u64 {
        let (n, k) = (self.n as u64, self.k as u64);
        let mut m = 4 * n * k + 1 + self.payoff_count() as u64;
        if self.with_analyte {
            m += 1;
        }
        if self.with_translators {
            m += 2 * (n - 1) + 2 * n;
        }
        m
    }

    /// Domain type count: `(2n+1)k^2`.
    pub fn expected_domain_types(&self) -> u64 {
        (2 * self.n as u64 + 1) * (self.k as u64).pow(2)
    }
}

fn domain(layer: u32, row: u32, col: u32, primed: bool) -> String {
    if primed {
        format!("d_{layer}_{row}_{col}_p")
    } else {
        format!("d_{layer}_{row}_{col}")
    }
}

fn site(layer: u32, row: u32, col: u32, primed: bool, starred: bool) -> SiteType {
    SiteType::new(&domain(layer, row, col, primed), starred).expect("generated names are valid")
}

fn monomer(label: String, sites: Vec<(SiteType, u32)>) -> MonomerType {
    MonomerType::from_counts(Some(&label), sites).expect("generated monomers are valid")
}

/// Named monomer types of one amplifier instance.
struct Parts {
    spec: AmplifierSpec,
}

impl Parts {
    fn copies(layer: u32) -> u32 {
        1 << (layer - 1)
    }

    /// The converging half is primed except at the last layer, where it
    /// reuses the unprimed `(n+1, ., .)` domains.
    fn converge_primed(&self, layer: u32) -> bool {
        layer <= self.spec.n
    }

    fn u(&self, i: u32, j: u32) -> MonomerType {
        let sites = (1..=self.spec.k).map(|l| (site(i, j, l, false, false), 1)).collect();
        monomer(format!("u_{i}_{j}"), sites)
    }

    fn s(&self, i: u32, j: u32) -> MonomerType {
        let k = self.spec.k;
        let mut sites: Vec<(SiteType, u32)> = (1..=k).map(|l| (site(i, j, l, false, true), 1)).collect();
        sites.extend((1..=k).map(|l| (site(i + 1, l, j, false, false), 2)));
        monomer(format!("s_{i}_{j}"), sites)
    }

    fn u_prime(&self, i: u32, j: u32) -> MonomerType {
        let primed = self.converge_primed(i + 1);
        let sites = (1..=self.spec.k).map(|l| (site(i + 1, j, l, primed, false), 2)).collect();
        monomer(format!("u'_{i}_{j}"), sites)
    }

    fn s_prime(&self, i: u32, j: u32) -> MonomerType {
        let k = self.spec.k;
        let primed = self.converge_primed(i + 1);
        let mut sites: Vec<(SiteType, u32)> = (1..=k).map(|l| (site(i + 1, j, l, primed, true), 2)).collect();
        sites.extend((1..=k).map(|l| (site(i, l, j, true, false), 1)));
        monomer(format!("s'_{i}_{j}"), sites)
    }

    fn payoff_star(&self) -> MonomerType {
        let k = self.spec.k;
        let sites = (1..=k).flat_map(|r| (1..=k).map(move |c| (site(1, r, c, true, true), 1))).collect();
        monomer("p*".to_string(), sites)
    }

    fn payoff(&self, j: u32) -> MonomerType {
        let k = self.spec.k;
        let rows = [2 * j - 1, 2 * j].into_iter().filter(|r| *r <= k);
        let sites = rows.flat_map(|r| (1..=k).map(move |c| (site(1, r, c, true, false), 1))).collect();
        monomer(format!("p_{j}"), sites)
    }

    fn analyte(&self) -> MonomerType {
        let k = self.spec.k;
        let sites = (1..=k).flat_map(|r| (1..=k).map(move |c| (site(1, r, c, false, false), 1))).collect();
        monomer("a".to_string(), sites)
    }

    fn grid(&self, layer: u32, primed: bool, starred: bool, times: u32) -> Vec<(SiteType, u32)> {
        let k = self.spec.k;
        (1..=k).flat_map(|r| (1..=k).map(move |c| (site(layer, r, c, primed, starred), times))).collect()
    }

    fn g(&self, i: u32) -> MonomerType {
        monomer(format!("g{i}"), self.grid(i, false, false, 1))
    }

    fn g_star(&self, i: u32) -> MonomerType {
        monomer(format!("g{i}*"), self.grid(i, false, true, 1))
    }

    fn h(&self, i: u32) -> MonomerType {
        monomer(format!("h{i}"), self.grid(i, self.converge_primed(i), false, 2))
    }

    fn h_star(&self, i: u32) -> MonomerType {
        monomer(format!("h{i}*"), self.grid(i, self.converge_primed(i), true, 1))
    }

    fn rows(&self) -> std::ops::RangeInclusive<u32> {
        1..=self.spec.k
    }

    fn layers(&self) -> std::ops::RangeInclusive<u32> {
        1..=self.spec.n
    }
}

pub fn build_amplifier(spec: &AmplifierSpec) -> Result<Tbn> {
    spec.validate()?;
    let parts = Parts { spec: *spec };
    let mut tbn = Tbn::new();
    for i in parts.layers() {
        let c = Parts::copies(i);
        for j in parts.rows() {
            tbn.add(parts.u(i, j), c);
            tbn.add(parts.s(i, j), c);
            tbn.add(parts.u_prime(i, j), c);
            tbn.add(parts.s_prime(i, j), c);
        }
    }
    tbn.add(parts.payoff_star(), 1);
    for j in 1..=spec.payoff_count() {
        tbn.add(parts.payoff(j), 1);
    }
    if spec.with_analyte {
        tbn.add(parts.analyte(), 1);
    }
    if spec.with_translators {
        for i in 2..=spec.n {
            tbn.add(parts.g(i), Parts::copies(i));
            tbn.add(parts.g_star(i), Parts::copies(i));
        }
        for i in 2..=spec.n + 1 {
            tbn.add(parts.h(i), Parts::copies(i));
            tbn.add(parts.h_star(i), 2 * Parts::copies(i));
        }
    }
    Ok(tbn)
}

/// The analyte monomer of the family.
pub fn analyte_monomer(k: u32) -> Result<MonomerType> {
    let spec = AmplifierSpec::plain(1, k)?;
    Ok(Parts { spec }.analyte())
}

fn poly(ms: impl IntoIterator<Item = (MonomerType, u32)>) -> Polymer {
    Polymer::from_counts(ms).expect("reference polymers are non-empty")
}

/// The intended stable configuration of the instance described by `spec`.
pub fn reference_configuration(spec: &AmplifierSpec) -> Result<Configuration> {
    spec.validate()?;
    let parts = Parts { spec: *spec };
    let payoffs: Vec<MonomerType> = (1..=spec.payoff_count()).map(|j| parts.payoff(j)).collect();
    let mut items: Vec<(Polymer, u32)> = Vec::new();

    match (spec.with_analyte, spec.with_translators) {
        (false, _) => {
            for i in parts.layers() {
                let c = Parts::copies(i);
                for j in parts.rows() {
                    items.push((poly([(parts.s(i, j), 1), (parts.u(i, j), 1)]), c));
                    items.push((poly([(parts.s_prime(i, j), 1), (parts.u_prime(i, j), 1)]), c));
                }
            }
            let mut payoff = vec![(parts.payoff_star(), 1)];
            payoff.extend(payoffs.iter().map(|p| (p.clone(), 1)));
            items.push((poly(payoff), 1));
            if spec.with_translators {
                for i in 2..=spec.n {
                    items.push((poly([(parts.g(i), 1), (parts.g_star(i), 1)]), Parts::copies(i)));
                }
                for i in 2..=spec.n + 1 {
                    items.push((poly([(parts.h(i), 1), (parts.h_star(i), 2)]), Parts::copies(i)));
                }
            }
        }
        (true, false) => {
            let mut giant = vec![(parts.analyte(), 1), (parts.payoff_star(), 1)];
            for i in parts.layers() {
                let c = Parts::copies(i);
                for j in parts.rows() {
                    giant.push((parts.s(i, j), c));
                    giant.push((parts.s_prime(i, j), c));
                }
            }
            items.push((poly(giant), 1));
            push_free(&parts, &payoffs, &mut items);
        }
        (true, true) => {
            let n = spec.n;
            for i in parts.layers() {
                let c = Parts::copies(i);
                let trigger = if i == 1 { parts.analyte() } else { parts.g(i) };
                let forward = if i < n { parts.g_star(i + 1) } else { parts.h_star(n + 1) };
                let mut fan = vec![(trigger, 1), (forward, 2)];
                fan.extend(parts.rows().map(|j| (parts.s(i, j), 1)));
                items.push((poly(fan), c));

                let back = if i == 1 { parts.payoff_star() } else { parts.h_star(i) };
                let mut converge = vec![(parts.h(i + 1), 1), (back, 1)];
                converge.extend(parts.rows().map(|j| (parts.s_prime(i, j), 1)));
                items.push((poly(converge), c));
            }
            // leftover h halves pair up as before
            for i in 2..=n + 1 {
                items.push((poly([(parts.h(i), 1), (parts.h_star(i), 2)]), Parts::copies(i - 1)));
            }
            push_free(&parts, &payoffs, &mut items);
        }
    }
    let tbn = build_amplifier(spec)?;
    Configuration::for_tbn(&tbn, items)
}

fn push_free(parts: &Parts, payoffs: &[MonomerType], items: &mut Vec<(Polymer, u32)>) {
    for i in parts.layers() {
        let c = Parts::copies(i);
        for j in parts.rows() {
            items.push((Polymer::singleton(parts.u(i, j)), c));
            items.push((Polymer::singleton(parts.u_prime(i, j)), c));
        }
    }
    for p in payoffs {
        items.push((Polymer::singleton(p.clone()), 1));
    }
}

/// Whether `monomer` is one of the reporter monomers `u_i_j` or `u'_i_j`.
pub fn is_reporter(monomer: &MonomerType) -> bool {
    monomer.label().is_some_and(|l| l.starts_with("u_") || l.starts_with("u'_"))
}

/// A small named TBN with some of its configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureExample {
    pub tbn: Tbn,
    pub configurations: Vec<(String, Configuration)>,
}

impl FigureExample {
    pub fn configuration(&self, name: &str) -> Option<&Configuration> {
        self.configurations.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }
}

pub fn figure_examples() -> BTreeMap<&'static str, FigureExample> {
    let mono = |label: &str, sites: &str| MonomerType::parse(Some(label), sites).expect("valid");
    let single = |ms: &[&MonomerType]| Polymer::new(ms.iter().map(|m| (*m).clone())).expect("valid");
    let mut out = BTreeMap::new();

    let m1 = mono("m1", "a b");
    let m2 = mono("m2", "a* b*");
    let m3 = mono("m3", "a");
    let m4 = mono("m4", "b");
    let tbn = Tbn::from_monomers([m1.clone(), m2.clone(), m3.clone(), m4.clone()].map(|m| (m, 1)));
    let two = Configuration::from_counts([(single(&[&m1]), 1), (single(&[&m2, &m3, &m4]), 1)]);
    let stable =
        Configuration::from_counts([(single(&[&m1, &m2]), 1), (single(&[&m3]), 1), (single(&[&m4]), 1)]);
    out.insert(
        "figure1",
        FigureExample {
            configurations: vec![
                ("melt".to_string(), tbn.melt()),
                ("two_polymers".to_string(), two),
                ("stable".to_string(), stable),
            ],
            tbn,
        },
    );

    let ff = Tbn::from_monomers([mono("x", "a b"), mono("y", "a* c"), mono("z", "b* c*")].map(|m| (m, 1)));
    out.insert(
        "feed_forward",
        FigureExample { configurations: vec![("melt".to_string(), ff.melt())], tbn: ff },
    );

    let cyc = Tbn::from_monomers([mono("x", "a b*"), mono("y", "a* b")].map(|m| (m, 1)));
    out.insert(
        "not_feed_forward",
        FigureExample { configurations: vec![("melt".to_string(), cyc.melt())], tbn: cyc },
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::config_distance;

    #[test]
    fn t23_counts() {
        let spec = AmplifierSpec::plain(2, 3).unwrap();
        let tbn = build_amplifier(&spec).unwrap();
        assert_eq!(tbn.total_monomers(), 39);
        assert_eq!(tbn.num_monomer_types(), 27);
        assert_eq!(tbn.site_names().len() as u64, spec.expected_domain_types());
        assert_eq!(tbn.monomer_types().map(|m| m.total_sites()).max(), Some(9));
        assert_eq!(tbn.melt().starriness(), 19);
        let with = build_amplifier(&spec.with_analyte(true)).unwrap();
        assert_eq!(with.total_monomers(), 40);
    }

    #[test]
    fn reference_counts() {
        let spec = AmplifierSpec::plain(2, 3).unwrap();
        let sigma = reference_configuration(&spec).unwrap();
        let sigma_a = reference_configuration(&spec.with_analyte(true)).unwrap();
        assert_eq!(sigma.polymer_count(), 19);
        assert_eq!(sigma_a.polymer_count(), 21);
        assert!(sigma.is_saturated() && sigma_a.is_saturated());
        assert_eq!(config_distance(&sigma, &sigma_a), 40);
        assert_eq!(sigma.merginess(), 20);
    }

    #[test]
    fn families_are_star_limiting_and_feed_forward() {
        for n in 1..=3 {
            for k in 2..=4 {
                for (analyte, translators) in [(false, false), (true, false), (false, true), (true, true)] {
                    let spec = AmplifierSpec::new(n, k, analyte, translators).unwrap();
                    let tbn = build_amplifier(&spec).unwrap();
                    assert!(tbn.is_star_limiting(), "{spec:?}");
                    assert!(tbn.is_feed_forward(), "{spec:?}");
                    assert_eq!(tbn.num_monomer_types() as u64, spec.expected_monomer_types());
                    assert_eq!(tbn.site_names().len() as u64, spec.expected_domain_types());
                    let sigma = reference_configuration(&spec).unwrap();
                    assert!(sigma.is_saturated(), "{spec:?}");
                }
            }
        }
    }

    #[test]
    fn translator_reference_is_small() {
        let spec = AmplifierSpec::new(2, 3, true, true).unwrap();
        let sigma = reference_configuration(&spec).unwrap();
        assert_eq!(sigma.max_polymer_size(), 6);
        let tbn = build_amplifier(&spec).unwrap();
        assert_eq!(sigma.merginess(), tbn.melt().starriness());
    }

    #[test]
    fn invalid_specs() {
        assert!(AmplifierSpec::plain(0, 3).is_err());
        assert!(AmplifierSpec::plain(1, 1).is_err());
    }

    #[test]
    fn figure_one() {
        let ex = &figure_examples()["figure1"];
        assert_eq!(ex.configuration("melt").unwrap().polymer_count(), 4);
        let two = ex.configuration("two_polymers").unwrap();
        assert!(two.is_saturated());
        assert_eq!(two.polymer_count(), 2);
        assert!(ex.configuration("stable").unwrap().is_saturated());
        assert!(figure_examples()["feed_forward"].tbn.is_feed_forward());
        assert!(!figure_examples()["not_feed_forward"].tbn.is_feed_forward());
    }
}
