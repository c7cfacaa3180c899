//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tbn::model::{Configuration, MonomerType, Polymer, SiteType, Tbn};

pub const SITE_NAMES: [&str; 4] = ["a", "b", "c", "d"];

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// A star-limiting TBN with at most `max_copies` monomers over at most
/// `max_site_types` site names.
pub fn random_tbn(rng: &mut impl Rng, max_copies: u32, max_site_types: usize) -> Tbn {
    let site_types = rng.gen_range(1..=max_site_types);
    let monomer_types = rng.gen_range(1..=4);
    let mut left = rng.gen_range(1..=max_copies);
    let mut items = Vec::new();
    for i in 0..monomer_types {
        if left == 0 {
            break;
        }
        let sites: Vec<SiteType> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let name = SITE_NAMES[rng.gen_range(0..site_types)];
                SiteType::new(name, rng.gen_bool(0.5)).unwrap()
            })
            .collect();
        let count = rng.gen_range(1..=left.min(4));
        left -= count;
        let label = format!("m{i}");
        items.push((MonomerType::new(Some(&label), sites).unwrap(), count));
    }
    Tbn::from_monomers(items).normalize_polarity().0
}

/// `count` random TBNs from a fixed seed.
pub fn random_suite(seed: u64, count: usize, max_copies: u32, max_site_types: usize) -> Vec<Tbn> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_tbn(&mut rng, max_copies, max_site_types)).collect()
}

/// Every configuration of `tbn`, saturated or not. Exponential; keep small.
pub fn all_configurations(tbn: &Tbn) -> Vec<Configuration> {
    let types: Vec<(MonomerType, u32)> =
        tbn.iter().filter(|(_, c)| *c > 0).map(|(m, c)| (m.clone(), c)).collect();
    let mut rem: Vec<u32> = types.iter().map(|(_, c)| *c).collect();
    let mut blocks = Vec::new();
    let mut out = Vec::new();
    partitions(&types, &mut rem, &mut blocks, &mut out);
    out.sort();
    out
}

fn partitions(
    types: &[(MonomerType, u32)],
    rem: &mut Vec<u32>,
    blocks: &mut Vec<Vec<u32>>,
    out: &mut Vec<Configuration>,
) {
    let Some(first) = rem.iter().position(|c| *c > 0) else {
        out.push(Configuration::from_counts(blocks.iter().map(|b| {
            let monomers =
                b.iter().enumerate().filter(|(_, c)| **c > 0).map(|(t, c)| (types[t].0.clone(), *c));
            (Polymer::from_counts(monomers).unwrap(), 1)
        })));
        return;
    };
    // each block holds the first remaining type; blocks are nondecreasing
    let mut block = vec![0u32; rem.len()];
    block[first] = 1;
    loop {
        let same_pivot = blocks.last().filter(|last| last.iter().position(|c| *c > 0) == Some(first));
        if same_pivot.is_none_or(|last| *last <= block) {
            for (r, b) in rem.iter_mut().zip(&block) {
                *r -= b;
            }
            blocks.push(block.clone());
            partitions(types, rem, blocks, out);
            blocks.pop();
            for (r, b) in rem.iter_mut().zip(&block) {
                *r += b;
            }
        }
        let mut t = first;
        loop {
            if t == rem.len() {
                return;
            }
            let low = u32::from(t == first);
            if block[t] < rem[t] {
                block[t] += 1;
                break;
            }
            block[t] = low;
            t += 1;
        }
    }
}
