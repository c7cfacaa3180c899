//! Integral dual bound for the polymer-count maximization.
//!
//! Any weights `y` with `sum_m P(m) y_m >= 1` for every column bound the
//! number of polymers formable from `rem` by `sum_m rem(m) y_m`. The LP
//! optimum is rounded to a common denominator and re-verified in integers,
//! so the bound stays sound whatever the floating-point error.
//!
//! The weights are kept nonnegative. Free weights give a tighter bound in
//! rare cases, but the solver can cycle on their degenerate directions.

use microlp::{ComparisonOp, OptimizationDirection, Problem};

pub(crate) const DENOMINATOR: i64 = 2520;

/// Integer weights over `DENOMINATOR`, one per monomer type.
#[derive(Debug, Clone)]
pub(crate) struct DualWeights {
    pub weights: Vec<i64>,
}

impl DualWeights {
    /// `floor(sum rem * w / DENOMINATOR)` given the running dot product.
    pub fn bound(dot: i64) -> i64 {
        dot.div_euclid(DENOMINATOR)
    }
}

/// Solves the dual LP for `columns` (sparse `(type, count)` lists) with
/// right-hand side `counts`; `None` if the LP fails or rounding breaks
/// feasibility.
pub(crate) fn dual_weights(columns: &[Vec<(usize, u32)>], counts: &[u32]) -> Option<DualWeights> {
    if columns.is_empty() {
        return None;
    }
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = counts.iter().map(|c| lp.add_var(*c as f64, (0.0, f64::INFINITY))).collect();
    for col in columns {
        let terms: Vec<_> = col.iter().map(|(t, c)| (vars[*t], *c as f64)).collect();
        lp.add_constraint(terms.as_slice(), ComparisonOp::Ge, 1.0);
    }
    let solution = lp.solve().ok()?.into_solution().ok()?;
    let weights: Vec<i64> = vars
        .iter()
        .map(|v| {
            let scaled = solution.var_value(*v) * DENOMINATOR as f64;
            if !scaled.is_finite() || scaled.abs() > 1e12 {
                return None;
            }
            Some((scaled - 1e-6).ceil().max(0.0) as i64)
        })
        .collect::<Option<_>>()?;
    let feasible = columns
        .iter()
        .all(|col| col.iter().map(|(t, c)| weights[*t] * *c as i64).sum::<i64>() >= DENOMINATOR);
    feasible.then_some(DualWeights { weights })
}
