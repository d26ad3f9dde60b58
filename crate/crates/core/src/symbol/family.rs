use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{
    dprime_structure_constants, wedge_into_basis, FormIndex, InvolutiveFrame, MultiIndexBasis,
    Wedge,
};
use crate::error::{Error, Result};
use crate::linalg::{frobenius, singular_values, CMatrix, CVector, FullSvd, C64, ZERO};
use crate::spectral::{EigenLevel, LevelMatrix, SpectrumTruncation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Provenance {
    AssembledDprime { p: usize, q: usize },
    UserDefined,
    Quantized,
}

/// The symbol of a family at one level.
///
/// Rows and columns are indexed by `block·d + mode`, `d` the level dimension.
/// `ModeBlocks` stores a family that never couples different modes: the
/// entry `(i·d + k, j·d + k)` is `data[(k·rows + i)·cols + j]` and every other
/// entry vanishes. Torus symbols always have this form.
#[derive(Clone, Debug, PartialEq)]
pub enum LevelSymbol {
    Dense(CMatrix),
    ModeBlocks {
        rows: usize,
        cols: usize,
        data: Vec<C64>,
    },
}

impl LevelSymbol {
    pub fn mode_block(&self, k: usize) -> Option<CMatrix> {
        match self {
            LevelSymbol::ModeBlocks { rows, cols, data } => {
                let off = k * rows * cols;
                Some(CMatrix::from_row_slice(
                    *rows,
                    *cols,
                    &data[off..off + rows * cols],
                ))
            }
            LevelSymbol::Dense(_) => None,
        }
    }

    pub fn to_dense(&self, d: usize) -> CMatrix {
        match self {
            LevelSymbol::Dense(m) => m.clone(),
            LevelSymbol::ModeBlocks { rows, cols, data } => {
                let mut out = CMatrix::zeros(rows * d, cols * d);
                for k in 0..d {
                    for i in 0..*rows {
                        for j in 0..*cols {
                            out[(i * d + k, j * d + k)] = data[(k * rows + i) * cols + j];
                        }
                    }
                }
                out
            }
        }
    }

    pub fn frobenius(&self) -> f64 {
        match self {
            LevelSymbol::Dense(m) => frobenius(m),
            LevelSymbol::ModeBlocks { data, .. } => {
                data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
            }
        }
    }

    pub fn apply(&self, d: usize, v: &CVector) -> CVector {
        match self {
            LevelSymbol::Dense(m) => m * v,
            LevelSymbol::ModeBlocks { rows, cols, data } => {
                let mut out = CVector::zeros(rows * d);
                for k in 0..d {
                    for i in 0..*rows {
                        let mut acc = ZERO;
                        for j in 0..*cols {
                            acc += data[(k * rows + i) * cols + j] * v[j * d + k];
                        }
                        out[i * d + k] = acc;
                    }
                }
                out
            }
        }
    }

    /// All singular values, block by block for mode-block symbols.
    pub fn singular_values(&self, d: usize) -> Vec<f64> {
        match self {
            LevelSymbol::ModeBlocks { rows, cols, data } if *rows == 1 && *cols == 1 => {
                data.iter().map(|z| z.norm()).collect()
            }
            LevelSymbol::ModeBlocks { .. } => (0..d)
                .flat_map(|k| singular_values(&self.mode_block(k).expect("mode blocks")))
                .collect(),
            LevelSymbol::Dense(m) => singular_values(m),
        }
    }

    /// Minimum-norm least-squares solution of `P̂ x = b`, dropping singular
    /// values at or below `threshold`.
    pub fn solve_above(&self, d: usize, b: &CVector, threshold: f64) -> CVector {
        match self {
            LevelSymbol::Dense(m) => FullSvd::new(m).solve_above(b, threshold),
            LevelSymbol::ModeBlocks { rows, cols, .. } => {
                let mut x = CVector::zeros(cols * d);
                for k in 0..d {
                    let block = self.mode_block(k).expect("mode blocks");
                    let rhs = CVector::from_fn(*rows, |i, _| b[i * d + k]);
                    let sol = if *rows == 1 && *cols == 1 {
                        let z = block[(0, 0)];
                        let v = if z.norm() > threshold { rhs[0] / z } else { ZERO };
                        CVector::from_element(1, v)
                    } else {
                        FullSvd::new(&block).solve_above(&rhs, threshold)
                    };
                    for j in 0..*cols {
                        x[j * d + k] = sol[j];
                    }
                }
                x
            }
        }
    }

    fn compose(&self, other: &LevelSymbol, d: usize) -> LevelSymbol {
        match (self, other) {
            (
                LevelSymbol::ModeBlocks { rows, cols, data },
                LevelSymbol::ModeBlocks {
                    cols: inner_cols,
                    data: inner,
                    ..
                },
            ) => {
                let (r, m, c) = (*rows, *cols, *inner_cols);
                let mut out = vec![ZERO; d * r * c];
                for k in 0..d {
                    for i in 0..r {
                        for j in 0..c {
                            let mut acc = ZERO;
                            for l in 0..m {
                                acc += data[(k * r + i) * m + l] * inner[(k * m + l) * c + j];
                            }
                            out[(k * r + i) * c + j] = acc;
                        }
                    }
                }
                LevelSymbol::ModeBlocks {
                    rows: r,
                    cols: c,
                    data: out,
                }
            }
            _ => LevelSymbol::Dense(self.to_dense(d) * other.to_dense(d)),
        }
    }
}

/// A Δ-invariant operator between `source_arity` and `target_arity` copies of
/// the spectral sequence space, stored as one symbol per level.
#[derive(Clone, Debug)]
pub struct SymbolFamily {
    truncation: Arc<SpectrumTruncation>,
    pub source_arity: usize,
    pub target_arity: usize,
    pub provenance: Provenance,
    levels: Vec<LevelSymbol>,
}

impl SymbolFamily {
    /// Builds a family from one dense matrix per level.
    pub fn from_fn<F>(
        truncation: Arc<SpectrumTruncation>,
        source_arity: usize,
        target_arity: usize,
        provenance: Provenance,
        f: F,
    ) -> Result<Self>
    where
        F: Fn(&EigenLevel) -> CMatrix,
    {
        let mut levels = Vec::with_capacity(truncation.len());
        for level in &truncation.levels {
            let m = f(level);
            let expected = (target_arity * level.dim, source_arity * level.dim);
            if m.shape() != expected {
                return Err(Error::ShapeMismatch(format!(
                    "level {} expects {}x{}, got {}x{}",
                    level.lambda,
                    expected.0,
                    expected.1,
                    m.nrows(),
                    m.ncols()
                )));
            }
            levels.push(LevelSymbol::Dense(m));
        }
        Ok(Self {
            truncation,
            source_arity,
            target_arity,
            provenance,
            levels,
        })
    }

    pub fn from_levels(
        truncation: Arc<SpectrumTruncation>,
        source_arity: usize,
        target_arity: usize,
        provenance: Provenance,
        levels: Vec<LevelSymbol>,
    ) -> Result<Self> {
        if levels.len() != truncation.len() {
            return Err(Error::TruncationMismatch);
        }
        for (level, sym) in truncation.levels.iter().zip(&levels) {
            let ok = match sym {
                LevelSymbol::Dense(m) => {
                    m.shape() == (target_arity * level.dim, source_arity * level.dim)
                }
                LevelSymbol::ModeBlocks { rows, cols, data } => {
                    *rows == target_arity
                        && *cols == source_arity
                        && data.len() == level.dim * rows * cols
                }
            };
            if !ok {
                return Err(Error::ShapeMismatch(format!("level {}", level.lambda)));
            }
        }
        Ok(Self {
            truncation,
            source_arity,
            target_arity,
            provenance,
            levels,
        })
    }

    pub fn identity(truncation: Arc<SpectrumTruncation>, arity: usize) -> Self {
        Self::scalar(truncation, arity, |_| C64::new(1.0, 0.0))
    }

    pub fn zero(truncation: Arc<SpectrumTruncation>, source_arity: usize, target_arity: usize) -> Self {
        let levels = truncation
            .levels
            .iter()
            .map(|l| LevelSymbol::ModeBlocks {
                rows: target_arity,
                cols: source_arity,
                data: vec![ZERO; l.dim * source_arity * target_arity],
            })
            .collect();
        Self {
            truncation,
            source_arity,
            target_arity,
            provenance: Provenance::UserDefined,
            levels,
        }
    }

    /// `f(λ)·Identity` at every level.
    pub fn scalar<F: Fn(&EigenLevel) -> C64>(
        truncation: Arc<SpectrumTruncation>,
        arity: usize,
        f: F,
    ) -> Self {
        let levels = truncation
            .levels
            .iter()
            .map(|l| {
                let v = f(l);
                let mut data = vec![ZERO; l.dim * arity * arity];
                for k in 0..l.dim {
                    for i in 0..arity {
                        data[(k * arity + i) * arity + i] = v;
                    }
                }
                LevelSymbol::ModeBlocks {
                    rows: arity,
                    cols: arity,
                    data,
                }
            })
            .collect();
        Self {
            truncation,
            source_arity: arity,
            target_arity: arity,
            provenance: Provenance::UserDefined,
            levels,
        }
    }

    /// The operator given by one complex vector field `Σ c_a X_a`.
    pub fn vector_field(truncation: Arc<SpectrumTruncation>, coeffs: &[C64]) -> Self {
        let levels = truncation
            .levels
            .iter()
            .map(|l| match l.complex_field_symbol(coeffs) {
                LevelMatrix::Diagonal(data) => LevelSymbol::ModeBlocks {
                    rows: 1,
                    cols: 1,
                    data,
                },
                LevelMatrix::Dense(m) => LevelSymbol::Dense(m),
            })
            .collect();
        Self {
            truncation,
            source_arity: 1,
            target_arity: 1,
            provenance: Provenance::UserDefined,
            levels,
        }
    }

    pub fn truncation(&self) -> &Arc<SpectrumTruncation> {
        &self.truncation
    }

    pub fn levels(&self) -> &[LevelSymbol] {
        &self.levels
    }

    pub fn level(&self, idx: usize) -> &LevelSymbol {
        &self.levels[idx]
    }

    pub fn level_dense(&self, idx: usize) -> CMatrix {
        self.levels[idx].to_dense(self.truncation.levels[idx].dim)
    }

    pub(crate) fn same_truncation(&self, other: &Arc<SpectrumTruncation>) -> bool {
        Arc::ptr_eq(&self.truncation, other) || self.truncation.same_levels(other)
    }

    /// Composition `self ∘ inner`, level by level.
    pub fn compose(&self, inner: &SymbolFamily) -> Result<SymbolFamily> {
        if !self.same_truncation(&inner.truncation) {
            return Err(Error::TruncationMismatch);
        }
        if self.source_arity != inner.target_arity {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose arity {} -> {} after {} -> {}",
                self.source_arity, self.target_arity, inner.source_arity, inner.target_arity
            )));
        }
        let levels = self
            .levels
            .par_iter()
            .zip(inner.levels.par_iter())
            .zip(self.truncation.levels.par_iter())
            .map(|((a, b), l)| a.compose(b, l.dim))
            .collect();
        Ok(SymbolFamily {
            truncation: self.truncation.clone(),
            source_arity: inner.source_arity,
            target_arity: self.target_arity,
            provenance: Provenance::UserDefined,
            levels,
        })
    }

    /// Conjugates the symbols at one level: `P̂(λ) ↦ left·P̂(λ)·right`.
    pub fn conjugate_level(&mut self, idx: usize, left: &CMatrix, right: &CMatrix) {
        let d = self.truncation.levels[idx].dim;
        let dense = self.levels[idx].to_dense(d);
        self.levels[idx] = LevelSymbol::Dense(left * dense * right);
    }
}

/// Max over levels of `‖P̂(λ)Q̂(λ)‖ / (1 + ‖P̂(λ)‖·‖Q̂(λ)‖)` (Frobenius norms).
pub fn check_complex(p: &SymbolFamily, q: &SymbolFamily) -> Result<f64> {
    if !p.same_truncation(&q.truncation) {
        return Err(Error::TruncationMismatch);
    }
    if p.source_arity != q.target_arity {
        return Err(Error::ShapeMismatch(format!(
            "P has source arity {}, Q has target arity {}",
            p.source_arity, q.target_arity
        )));
    }
    let worst = p
        .levels
        .par_iter()
        .zip(q.levels.par_iter())
        .zip(p.truncation.levels.par_iter())
        .map(|((a, b), l)| {
            let prod = a.compose(b, l.dim).frobenius();
            prod / (1.0 + a.frobenius() * b.frobenius())
        })
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(0.0, f64::max);
    Ok(worst)
}

/// One term `sign·L̂_j` of a block `(target, source)` of d′.
struct FieldTerm {
    target: usize,
    source: usize,
    field: usize,
    sign: f64,
}

/// The d′ operator from (p,q)- to (p,q+1)-forms as a per-level block matrix.
///
/// Block `(t, s)` is `Σ_j sign(τ_j ∧ ζ_I ∧ τ_J → t)·L̂_j(λ) + α[s][t]·Identity`.
pub fn assemble_dprime(
    frame: &InvolutiveFrame,
    truncation: &Arc<SpectrumTruncation>,
    p: usize,
    q: usize,
) -> Result<SymbolFamily> {
    let algebra = truncation.backend.algebra();
    if algebra.spec().c != frame.algebra().spec().c {
        return Err(Error::TruncationMismatch);
    }
    let constants = dprime_structure_constants(frame, p, q)?;
    let source = &constants.source;
    let target = &constants.target;
    let (s_len, t_len) = (source.len(), target.len());

    let mut terms = Vec::new();
    if !target.is_empty() {
        for s in 0..s_len {
            let factors = source.factors(s);
            for j in 0..frame.n {
                let mut f = Vec::with_capacity(factors.len() + 1);
                f.push(FormIndex::Tau(j));
                f.extend_from_slice(&factors);
                if let Wedge::Term { sign, zetas, taus } = wedge_into_basis(&f) {
                    let t = target.index_of(&zetas, &taus).expect("bidegree (p, q+1)");
                    terms.push(FieldTerm {
                        target: t,
                        source: s,
                        field: j,
                        sign: f64::from(sign),
                    });
                }
            }
        }
    }
    let l_coeffs: Vec<Vec<C64>> = (0..frame.n).map(|j| frame.l_vector(j)).collect();
    let constant_part: Vec<((usize, usize), C64)> =
        constants.entries.iter().map(|(&k, &v)| (k, v)).collect();

    let levels = truncation
        .levels
        .par_iter()
        .map(|level| {
            let d = level.dim;
            let fields: Vec<LevelMatrix> = l_coeffs
                .iter()
                .map(|c| level.complex_field_symbol(c))
                .collect();
            let diagonal = fields.iter().all(|f| matches!(f, LevelMatrix::Diagonal(_)));
            if diagonal {
                let mut data = vec![ZERO; d * t_len * s_len];
                for term in &terms {
                    let LevelMatrix::Diagonal(diag) = &fields[term.field] else {
                        unreachable!()
                    };
                    for k in 0..d {
                        data[(k * t_len + term.target) * s_len + term.source] +=
                            diag[k] * term.sign;
                    }
                }
                for &((s, t), alpha) in &constant_part {
                    for k in 0..d {
                        data[(k * t_len + t) * s_len + s] += alpha;
                    }
                }
                LevelSymbol::ModeBlocks {
                    rows: t_len,
                    cols: s_len,
                    data,
                }
            } else {
                let dense: Vec<CMatrix> = fields.iter().map(LevelMatrix::to_dense).collect();
                let mut m = CMatrix::zeros(t_len * d, s_len * d);
                for term in &terms {
                    let mut block = m.view_mut((term.target * d, term.source * d), (d, d));
                    block += &dense[term.field] * C64::new(term.sign, 0.0);
                }
                for &((s, t), alpha) in &constant_part {
                    for k in 0..d {
                        m[(t * d + k, s * d + k)] += alpha;
                    }
                }
                LevelSymbol::Dense(m)
            }
        })
        .collect();

    SymbolFamily::from_levels(
        truncation.clone(),
        s_len,
        t_len,
        Provenance::AssembledDprime { p, q },
        levels,
    )
}

/// The source multi-index basis of d′ in bidegree (p,q).
pub fn dprime_basis(frame: &InvolutiveFrame, p: usize, q: usize) -> Result<MultiIndexBasis> {
    MultiIndexBasis::new(frame.m, frame.n, p, q)
}
