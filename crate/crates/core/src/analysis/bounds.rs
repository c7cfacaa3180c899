//! Closed-form size and distance bounds.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Result, TbnError};
use crate::model::Tbn;

/// Largest inner exponent, in decimal digits, that is evaluated exactly.
pub const DEFAULT_DIGIT_BUDGET: usize = 10_000;

/// Size parameters of a TBN.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TbnStats {
    /// Domain (site) types.
    pub d: u64,
    /// Monomer types with a positive count.
    pub m: u64,
    /// Most sites on a single monomer.
    pub a: u64,
    pub n: u64,
}

impl TbnStats {
    pub fn new(d: u64, m: u64, a: u64) -> Self {
        TbnStats { d, m, a, n: d.max(m).max(a) }
    }

    pub fn of(tbn: &Tbn) -> Self {
        let present = tbn.present();
        let a = present.monomer_types().map(|m| m.total_sites() as u64).max().unwrap_or(0);
        Self::new(present.site_names().len() as u64, present.num_monomer_types() as u64, a)
    }
}

/// `2(m+d)(ad)^(2d+3)`: no basis polymer has more monomers than this.
pub fn polymer_size_bound(stats: &TbnStats) -> BigUint {
    let base = BigUint::from(stats.a) * stats.d;
    let exp = u32::try_from(2 * stats.d + 3).expect("domain count fits in u32");
    BigUint::from(2u32) * (stats.m + stats.d) * base.pow(exp)
}

/// The distance bound `n^(8 n^(7n^2))` in logarithmic form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceBound {
    pub n: u64,
    /// `log10(log10(bound))`, always finite.
    pub log10_log10: f64,
    /// `log10(bound)`, when it fits in an `f64`.
    pub log10: Option<f64>,
    /// `n^(7n^2)` exactly, when it has at most the budgeted number of digits.
    #[serde(serialize_with = "serialize_opt_big")]
    pub inner_exponent: Option<BigUint>,
}

fn serialize_opt_big<S: serde::Serializer>(
    v: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(b) => s.serialize_str(&b.to_string()),
        None => s.serialize_none(),
    }
}

pub fn upper_bound_log10(stats: &TbnStats) -> Result<DistanceBound> {
    upper_bound_log10_with(stats, DEFAULT_DIGIT_BUDGET)
}

pub fn upper_bound_log10_with(stats: &TbnStats, digit_budget: usize) -> Result<DistanceBound> {
    let n = stats.n;
    if n < 2 {
        return Err(TbnError::InvalidArgument(format!("distance bound is degenerate for n = {n}")));
    }
    let nf = n as f64;
    let exp = 7 * n * n;
    // log10(8 n^(7n^2) log10 n) = log10 8 + 7n^2 log10 n + log10(log10 n)
    let log10_log10 = 8f64.log10() + exp as f64 * nf.log10() + nf.log10().log10();
    let log10 = Some(10f64.powf(log10_log10)).filter(|v| v.is_finite());
    let digits = exp as f64 * nf.log10();
    let inner_exponent = if digits <= digit_budget as f64 {
        u32::try_from(exp).ok().map(|e| BigUint::from(n).pow(e))
    } else {
        None
    };
    Ok(DistanceBound { n, log10_log10, log10, inner_exponent })
}
