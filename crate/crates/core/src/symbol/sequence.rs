use std::sync::Arc;

use serde::Serialize;

use super::family::SymbolFamily;
use super::weight::WeightFunction;
use crate::error::{Error, Result};
use crate::linalg::{vec_norm, CVector, C64, ZERO};
use crate::spectral::{EigenLevel, SpectrumTruncation};

/// A finite model of an element of the spectral sequence space: one
/// coefficient vector of length `arity·d_λ` per level.
#[derive(Clone, Debug)]
pub struct TruncatedSequence {
    truncation: Arc<SpectrumTruncation>,
    pub arity: usize,
    values: Vec<CVector>,
}

impl TruncatedSequence {
    pub fn zeros(truncation: Arc<SpectrumTruncation>, arity: usize) -> Self {
        let values = truncation
            .levels
            .iter()
            .map(|l| CVector::zeros(arity * l.dim))
            .collect();
        Self {
            truncation,
            arity,
            values,
        }
    }

    pub fn from_fn<F>(truncation: Arc<SpectrumTruncation>, arity: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, &EigenLevel) -> CVector,
    {
        let mut values = Vec::with_capacity(truncation.len());
        for (idx, level) in truncation.levels.iter().enumerate() {
            let v = f(idx, level);
            if v.len() != arity * level.dim {
                return Err(Error::ArityMismatch {
                    expected: arity * level.dim,
                    found: v.len(),
                });
            }
            values.push(v);
        }
        Ok(Self {
            truncation,
            arity,
            values,
        })
    }

    /// Entries with real and imaginary parts uniform in `[−1, 1)`.
    pub fn random<R: rand::Rng + ?Sized>(
        truncation: Arc<SpectrumTruncation>,
        arity: usize,
        rng: &mut R,
    ) -> Self {
        let values = truncation
            .levels
            .iter()
            .map(|l| {
                CVector::from_fn(arity * l.dim, |_, _| {
                    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                })
            })
            .collect();
        Self {
            truncation,
            arity,
            values,
        }
    }

    pub fn truncation(&self) -> &Arc<SpectrumTruncation> {
        &self.truncation
    }

    pub fn values(&self) -> &[CVector] {
        &self.values
    }

    pub fn at(&self, idx: usize) -> &CVector {
        &self.values[idx]
    }

    pub fn set(&mut self, idx: usize, v: CVector) -> Result<()> {
        let expected = self.values[idx].len();
        if v.len() != expected {
            return Err(Error::ArityMismatch {
                expected,
                found: v.len(),
            });
        }
        self.values[idx] = v;
        Ok(())
    }

    /// `(λ, ‖a(λ)‖)` for every level.
    pub fn level_norms(&self) -> Vec<(f64, f64)> {
        self.truncation
            .levels
            .iter()
            .zip(&self.values)
            .map(|(l, v)| (l.lambda_f64, vec_norm(v)))
            .collect()
    }

    /// Indices of levels where the sequence is nonzero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&i| self.values[i].iter().any(|z| *z != ZERO))
            .collect()
    }

    fn same_truncation(&self, other: &Arc<SpectrumTruncation>) -> bool {
        Arc::ptr_eq(&self.truncation, other) || self.truncation.same_levels(other)
    }
}

/// `(P a)(λ) = P̂(λ) a(λ)`.
pub fn apply(p: &SymbolFamily, a: &TruncatedSequence) -> Result<TruncatedSequence> {
    if p.source_arity != a.arity {
        return Err(Error::ArityMismatch {
            expected: p.source_arity,
            found: a.arity,
        });
    }
    if !a.same_truncation(p.truncation()) {
        return Err(Error::TruncationMismatch);
    }
    let values = a
        .truncation
        .levels
        .iter()
        .enumerate()
        .map(|(i, l)| p.level(i).apply(l.dim, &a.values[i]))
        .collect();
    Ok(TruncatedSequence {
        truncation: a.truncation.clone(),
        arity: p.target_arity,
        values,
    })
}

/// The bilinear pairing `Σ_λ Σ_i u(λ)_i v(λ)_i`.
pub fn pairing(u: &TruncatedSequence, v: &TruncatedSequence) -> Result<C64> {
    if !u.same_truncation(&v.truncation) || u.arity != v.arity {
        return Err(Error::TruncationMismatch);
    }
    let mut acc = ZERO;
    for (a, b) in u.values.iter().zip(&v.values) {
        for (x, y) in a.iter().zip(b.iter()) {
            acc += x * y;
        }
    }
    Ok(acc)
}

fn log_sum_exp(terms: impl Iterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.filter(|t| *t > f64::NEG_INFINITY).collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// `(Σ_λ e^{2tω(λ)} ‖a(λ)‖²)^{1/2}`, evaluated in log space.
pub fn weighted_norm(a: &TruncatedSequence, weight: &WeightFunction, t: f64) -> f64 {
    let lse = log_sum_exp(
        a.level_norms()
            .into_iter()
            .map(|(lambda, n)| 2.0 * t * weight.eval(lambda) + 2.0 * n.ln()),
    );
    (0.5 * lse).exp()
}

fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `max_{k ≤ k_max} h^{−2k} (2k)!^{−s} ‖(I+Δ)^k a‖`.
pub fn gevrey_seminorm(a: &TruncatedSequence, s: f64, h: f64, k_max: u32) -> Result<f64> {
    if !(s >= 1.0) || !(h > 0.0) {
        return Err(Error::InvalidInput(format!(
            "Gevrey seminorm needs s ≥ 1 and h > 0, got s={s}, h={h}"
        )));
    }
    let norms = a.level_norms();
    let mut best = f64::NEG_INFINITY;
    for k in 0..=u64::from(k_max) {
        let lse = log_sum_exp(
            norms
                .iter()
                .map(|&(lambda, n)| 2.0 * (2 * k) as f64 * lambda.ln_1p() + 2.0 * n.ln()),
        );
        let term = -2.0 * k as f64 * h.ln() - s * ln_factorial(2 * k) + 0.5 * lse;
        best = best.max(term);
    }
    Ok(best.exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnvelopeHint {
    /// Tail slopes keep growing: faster than every fixed exponential of ω.
    BeurlingTypeDecay,
    /// Positive tail slopes that stay put.
    RoumieuTypeDecay,
    /// Negative slope: the sequence grows along ω.
    TemperedGrowth,
    Flat,
    Inconclusive,
}

/// Least-squares fit `log‖a(λ)‖ ≈ log C − t·ω(λ)` over the nonzero levels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopeReport {
    pub slope: f64,
    pub log_constant: f64,
    pub max_positive_residual: f64,
    /// Slopes of fits restricted to the top half, quarter and eighth of the nonzero levels.
    pub tail_slopes: Vec<f64>,
    pub points: usize,
    pub hint: EnvelopeHint,
    pub note: &'static str,
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return (0.0, my);
    }
    let b = sxy / sxx;
    (b, my - b * mx)
}

pub fn envelope_fit(a: &TruncatedSequence, weight: &WeightFunction) -> Result<EnvelopeReport> {
    let pts: Vec<(f64, f64)> = a
        .level_norms()
        .into_iter()
        .filter(|&(_, n)| n > 0.0)
        .map(|(lambda, n)| (weight.eval(lambda), n.ln()))
        .collect();
    if pts.is_empty() {
        return Err(Error::AllZero);
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let (b, c) = least_squares(&xs, &ys);
    let max_positive_residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| y - (c + b * x))
        .fold(0.0, f64::max);

    let mut tail_slopes = Vec::new();
    for frac in [2, 4, 8] {
        let start = pts.len() - (pts.len() / frac).max(2).min(pts.len());
        if pts.len() - start >= 2 {
            tail_slopes.push(-least_squares(&xs[start..], &ys[start..]).0);
        }
    }
    let slope = -b;
    let hint = classify(slope, &tail_slopes);
    Ok(EnvelopeReport {
        slope,
        log_constant: c,
        max_positive_residual,
        tail_slopes,
        points: pts.len(),
        hint,
        note: "finite-cutoff evidence from least squares on log data; not a membership verdict",
    })
}

fn classify(slope: f64, tails: &[f64]) -> EnvelopeHint {
    const FLAT: f64 = 1e-9;
    let all: Vec<f64> = std::iter::once(slope).chain(tails.iter().copied()).collect();
    if all.iter().all(|s| s.abs() <= FLAT) {
        return EnvelopeHint::Flat;
    }
    if all.iter().all(|&s| s < -FLAT) {
        return EnvelopeHint::TemperedGrowth;
    }
    if all.iter().all(|&s| s > FLAT) {
        let growing = all.windows(2).all(|w| w[1] > 1.25 * w[0]);
        let lo = all.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = all.iter().copied().fold(0.0, f64::max);
        if growing {
            return EnvelopeHint::BeurlingTypeDecay;
        }
        if hi <= 1.25 * lo {
            return EnvelopeHint::RoumieuTypeDecay;
        }
    }
    EnvelopeHint::Inconclusive
}
