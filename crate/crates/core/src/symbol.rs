//! Per-level symbol families, truncated sequences and weight functions.

mod family;
mod sequence;
mod weight;

pub use family::{assemble_dprime, check_complex, dprime_basis, LevelSymbol, Provenance, SymbolFamily};
pub use sequence::{
    apply, envelope_fit, gevrey_seminorm, pairing, weighted_norm, EnvelopeHint, EnvelopeReport,
    TruncatedSequence,
};
pub use weight::{Flavor, WeightFunction, WeightKind};
