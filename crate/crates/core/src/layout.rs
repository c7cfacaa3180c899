//! Indexed view of a TBN: monomer types and site names as dense indices, and
//! polymers as count vectors. The combinatorial searches run on this view.

use std::collections::HashMap;
use std::sync::Arc;

use crate::model::{MonomerType, Polymer, Tbn};

#[derive(Debug, Clone)]
pub(crate) struct Layout {
    pub types: Vec<MonomerType>,
    pub counts: Vec<u32>,
    pub sites: Vec<Arc<str>>,
    /// `net[t][s]`: unstarred minus starred copies of site `s` on type `t`.
    pub net: Vec<Vec<i64>>,
    index: HashMap<MonomerType, usize>,
}

impl Layout {
    pub fn new(tbn: &Tbn) -> Self {
        let types: Vec<MonomerType> = tbn.monomer_types().cloned().collect();
        let counts = tbn.iter().map(|(_, c)| c).collect();
        let sites: Vec<Arc<str>> = tbn.site_names().into_iter().collect();
        let site_index: HashMap<&str, usize> = sites.iter().enumerate().map(|(i, s)| (&**s, i)).collect();
        let net = types
            .iter()
            .map(|m| {
                let mut row = vec![0i64; sites.len()];
                for (name, b) in m.balance() {
                    row[site_index[&*name]] = b;
                }
                row
            })
            .collect();
        let index = types.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Layout { types, counts, sites, net, index }
    }

    pub fn num_types(&self) -> usize {
        self.types.len()
    }

    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn index_of(&self, m: &MonomerType) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn vector(&self, p: &Polymer) -> Option<Vec<u32>> {
        let mut v = vec![0; self.types.len()];
        for (m, c) in p.monomers() {
            v[self.index_of(m)?] += c;
        }
        Some(v)
    }

    pub fn polymer(&self, v: &[u32]) -> Polymer {
        Polymer::from_counts(
            v.iter().enumerate().filter(|(_, c)| **c > 0).map(|(i, c)| (self.types[i].clone(), *c)),
        )
        .expect("non-empty count vector")
    }

    pub fn balance(&self, v: &[u32]) -> Vec<i64> {
        let mut out = vec![0i64; self.sites.len()];
        for (t, c) in v.iter().enumerate() {
            if *c > 0 {
                for (o, n) in out.iter_mut().zip(&self.net[t]) {
                    *o += n * *c as i64;
                }
            }
        }
        out
    }

    /// Types whose every site balance is non-negative, i.e. self-saturated
    /// when alone.
    pub fn is_unstarred_like(&self, t: usize) -> bool {
        self.net[t].iter().all(|n| *n >= 0)
    }
}
