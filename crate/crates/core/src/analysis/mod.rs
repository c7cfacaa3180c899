//! Entropy gap, TBN distance, amplifier verification and closed-form bounds.

mod amplifier;
mod bounds;
mod gap;

pub use amplifier::{verify_amplifier, AmplifierVerification, Check, CheckStatus, VerifyOptions};
pub use bounds::{
    polymer_size_bound, upper_bound_log10, upper_bound_log10_with, DistanceBound, TbnStats,
    DEFAULT_DIGIT_BUDGET,
};
pub use gap::{
    entropy_gap, entropy_gap_default, entropy_gap_with_basis, tbn_distance, EntropyGapReport, Gap,
};
