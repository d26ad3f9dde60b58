use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{CMatrix, CVector, FullSvd, RankPolicy};
use crate::spectral::{Rational, SpectrumTruncation};
use crate::symbol::SymbolFamily;

#[derive(Clone, Debug, Serialize)]
pub struct SigmaEntry {
    #[serde(with = "crate::spectral::rational_serde")]
    pub lambda: Rational,
    pub lambda_f64: f64,
    /// Smallest singular value above the rank threshold; `+∞` when `P̂(λ) = 0`.
    pub sigma_min_perp: f64,
    pub sigma_max: f64,
}

impl SigmaEntry {
    pub fn is_sentinel(&self) -> bool {
        self.sigma_min_perp.is_infinite()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SigmaSequence {
    pub entries: Vec<SigmaEntry>,
}

impl SigmaSequence {
    pub fn finite_count(&self) -> usize {
        self.entries.iter().filter(|e| !e.is_sentinel()).count()
    }
}

fn min_perp(values: &[f64], policy: RankPolicy) -> (f64, f64) {
    let max = values.iter().copied().fold(0.0, f64::max);
    let thr = policy.threshold(max);
    let min = values
        .iter()
        .copied()
        .filter(|&s| s > thr)
        .fold(f64::INFINITY, f64::min);
    (min, max)
}

/// `σ_min⊥(λ)` and `σ_max(λ)` at every level.
pub fn sigma_sequence(p: &SymbolFamily, policy: RankPolicy) -> SigmaSequence {
    let truncation: &SpectrumTruncation = p.truncation();
    let entries = truncation
        .levels
        .par_iter()
        .enumerate()
        .map(|(i, level)| {
            let sv = p.level(i).singular_values(level.dim);
            let (sigma_min_perp, sigma_max) = min_perp(&sv, policy);
            SigmaEntry {
                lambda: level.lambda,
                lambda_f64: level.lambda_f64,
                sigma_min_perp,
                sigma_max,
            }
        })
        .collect();
    SigmaSequence { entries }
}

/// A unit vector in `(ker P̂(λ))^⊥` realizing `σ_min⊥` at level `idx`, with
/// the dense symbol it was computed from.
pub fn min_perp_vector(
    p: &SymbolFamily,
    idx: usize,
    policy: RankPolicy,
) -> Option<(f64, CVector, CMatrix)> {
    let d = p.truncation().levels[idx].dim;
    let dense = p.level(idx).to_dense(d);
    let svd = FullSvd::new(&dense);
    let thr = policy.threshold(svd.sigma_max());
    let r = svd.rank_above(thr);
    if r == 0 {
        return None;
    }
    Some((
        svd.singular_values[r - 1],
        svd.v.column(r - 1).into_owned(),
        dense,
    ))
}
