//! Exhaustive enumeration of saturated configurations, independent of the
//! polymer basis. Used as ground truth on small networks.

use crate::error::{Result, TbnError};
use crate::layout::Layout;
use crate::model::{Configuration, Tbn};

pub const DEFAULT_BRUTE_FORCE_CAP: u64 = 12;

/// Limits for [`for_each_saturated`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkLimits {
    /// Largest number of monomer copies accepted.
    pub monomer_cap: u64,
    /// Configurations with fewer polymers are skipped.
    pub min_polymers: u64,
}

impl Default for WalkLimits {
    fn default() -> Self {
        WalkLimits { monomer_cap: DEFAULT_BRUTE_FORCE_CAP, min_polymers: 0 }
    }
}

/// Calls `visit` once for every saturated configuration of `tbn` with at
/// least `limits.min_polymers` polymers.
pub fn for_each_saturated(
    tbn: &Tbn,
    limits: WalkLimits,
    mut visit: impl FnMut(&Configuration),
) -> Result<()> {
    let total = tbn.total_monomers();
    if total > limits.monomer_cap {
        return Err(TbnError::BudgetExceeded { what: "brute-force monomer", limit: limits.monomer_cap });
    }
    let layout = Layout::new(&tbn.present());
    let mut walk =
        Walk { layout: &layout, min_polymers: limits.min_polymers, blocks: Vec::new(), visit: &mut visit };
    let mut rem = layout.counts.clone();
    walk.go(&mut rem, total, None);
    Ok(())
}

struct Walk<'a, F: FnMut(&Configuration)> {
    layout: &'a Layout,
    min_polymers: u64,
    blocks: Vec<Vec<u32>>,
    visit: &'a mut F,
}

impl<F: FnMut(&Configuration)> Walk<'_, F> {
    /// `last_pivot` is the pivot of the previous block; blocks for the same
    /// pivot are chosen in nondecreasing order.
    fn go(&mut self, rem: &mut Vec<u32>, left: u64, last_pivot: Option<usize>) {
        if (self.blocks.len() as u64) + left < self.min_polymers {
            return;
        }
        let Some(pivot) = rem.iter().position(|c| *c > 0) else {
            let config = Configuration::from_counts(self.blocks.iter().map(|b| (self.layout.polymer(b), 1)));
            (self.visit)(&config);
            return;
        };
        let mut candidates = self.blocks_with(pivot, rem);
        candidates.sort();
        let floor = match last_pivot {
            Some(p) if p == pivot => self.blocks.last().cloned(),
            _ => None,
        };
        for block in &candidates {
            if floor.as_ref().is_some_and(|f| block < f) {
                continue;
            }
            let size: u32 = block.iter().sum();
            for (r, b) in rem.iter_mut().zip(block) {
                *r -= b;
            }
            self.blocks.push(block.clone());
            self.go(rem, left - size as u64, Some(pivot));
            self.blocks.pop();
            for (r, b) in rem.iter_mut().zip(block) {
                *r += b;
            }
        }
    }

    /// Self-saturated sub-multisets of `rem` holding at least one `pivot`.
    fn blocks_with(&self, pivot: usize, rem: &[u32]) -> Vec<Vec<u32>> {
        let n = rem.len();
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        cur[pivot] = 1;
        loop {
            let bal = self.layout.balance(&cur);
            if bal.iter().all(|b| *b >= 0) {
                out.push(cur.clone());
            }
            // odometer over types from the pivot on
            let mut t = pivot;
            loop {
                if t == n {
                    return out;
                }
                let low = if t == pivot { 1 } else { 0 };
                if cur[t] < rem[t] {
                    cur[t] += 1;
                    break;
                }
                cur[t] = low;
                t += 1;
            }
        }
    }
}

/// Every saturated configuration of `tbn`, in canonical order.
pub fn saturated_configurations(tbn: &Tbn, monomer_cap: u64) -> Result<Vec<Configuration>> {
    let mut out = Vec::new();
    for_each_saturated(tbn, WalkLimits { monomer_cap, min_polymers: 0 }, |c| out.push(c.clone()))?;
    out.sort();
    Ok(out)
}
