//! Per-level cohomology of symbol complexes and the criteria built on it.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{binomial, InvolutiveFrame};
use crate::error::{Error, Result};
use crate::linalg::{
    frobenius, orthonormal_complement, vec_norm, CMatrix, CVector, FullSvd, RankPolicy, Tolerances,
};
use crate::spectral::{Rational, SpectrumTruncation};
use crate::symbol::{apply, assemble_dprime, LevelSymbol, SymbolFamily, TruncatedSequence};

/// Projected kernel directions shorter than this are not representatives.
pub const REPRESENTATIVE_DISCARD: f64 = 1e-8;

/// Cohomology of `Q̂ → P̂` on one finite-dimensional space.
#[derive(Clone, Debug)]
pub struct LevelResult {
    pub columns: usize,
    pub kernel_dim: usize,
    pub rank_p: usize,
    pub rank_q: usize,
    pub h: usize,
    /// Orthonormal basis of `ker P̂ ∩ (ran Q̂)^⊥`.
    pub representatives: CMatrix,
}

fn complex_residual(p: &CMatrix, q: &CMatrix) -> f64 {
    if p.ncols() == 0 || p.nrows() == 0 || q.ncols() == 0 {
        return 0.0;
    }
    frobenius(&(p * q)) / (1.0 + frobenius(p) * frobenius(q))
}

fn check_shapes(p: &CMatrix, q: &CMatrix) -> Result<()> {
    if p.ncols() != q.nrows() {
        return Err(Error::ShapeMismatch(format!(
            "P is {}x{}, Q is {}x{}",
            p.nrows(),
            p.ncols(),
            q.nrows(),
            q.ncols()
        )));
    }
    Ok(())
}

fn cohomology_with(
    p_svd: &FullSvd,
    q_svd: &FullSvd,
    thr_p: f64,
    thr_q: f64,
    columns: usize,
) -> LevelResult {
    let kernel = p_svd.kernel_above(thr_p);
    let range = q_svd.range_above(thr_q);
    let representatives = orthonormal_complement(&range, &kernel, REPRESENTATIVE_DISCARD);
    let kernel_dim = kernel.ncols();
    let rank_q = range.ncols();
    LevelResult {
        columns,
        kernel_dim,
        rank_p: columns - kernel_dim,
        rank_q,
        h: kernel_dim.saturating_sub(rank_q),
        representatives,
    }
}

/// Cohomology `ker P̂ / ran Q̂` of a two-term complex of matrices.
pub fn level_cohomology(p: &CMatrix, q: &CMatrix, tol: &Tolerances) -> Result<LevelResult> {
    check_shapes(p, q)?;
    let residual = complex_residual(p, q);
    if residual > tol.structure {
        return Err(Error::NotAComplex { residual });
    }
    let policy = tol.rank_policy();
    let ps = FullSvd::new(p);
    let qs = FullSvd::new(q);
    Ok(cohomology_with(
        &ps,
        &qs,
        policy.threshold(ps.sigma_max()),
        policy.threshold(qs.sigma_max()),
        p.ncols(),
    ))
}

/// Cohomology of one level of a pair of families, with the kernel threshold
/// of each operator taken relative to its largest singular value on the
/// whole level.
fn level_of_families(
    p: &LevelSymbol,
    q: &LevelSymbol,
    d: usize,
    policies: &[RankPolicy],
    structure_tol: f64,
) -> Result<Vec<LevelResult>> {
    match (p, q) {
        (
            LevelSymbol::ModeBlocks { cols, .. },
            LevelSymbol::ModeBlocks { .. },
        ) => {
            let cols = *cols;
            let mut p_svds = Vec::with_capacity(d);
            let mut q_svds = Vec::with_capacity(d);
            let mut residual: f64 = 0.0;
            for k in 0..d {
                let pk = p.mode_block(k).expect("mode blocks");
                let qk = q.mode_block(k).expect("mode blocks");
                residual = residual.max(frobenius(&(&pk * &qk)));
                p_svds.push(FullSvd::new(&pk));
                q_svds.push(FullSvd::new(&qk));
            }
            let rel = residual / (1.0 + p.frobenius() * q.frobenius());
            if rel > structure_tol {
                return Err(Error::NotAComplex { residual: rel });
            }
            let p_max = p_svds.iter().map(FullSvd::sigma_max).fold(0.0, f64::max);
            let q_max = q_svds.iter().map(FullSvd::sigma_max).fold(0.0, f64::max);
            Ok(policies
                .iter()
                .map(|policy| {
                    let (tp, tq) = (policy.threshold(p_max), policy.threshold(q_max));
                    let mut total = LevelResult {
                        columns: cols * d,
                        kernel_dim: 0,
                        rank_p: 0,
                        rank_q: 0,
                        h: 0,
                        representatives: CMatrix::zeros(cols * d, 0),
                    };
                    let mut reps: Vec<CVector> = Vec::new();
                    for k in 0..d {
                        let r = cohomology_with(&p_svds[k], &q_svds[k], tp, tq, cols);
                        total.kernel_dim += r.kernel_dim;
                        total.rank_p += r.rank_p;
                        total.rank_q += r.rank_q;
                        total.h += r.h;
                        for c in 0..r.representatives.ncols() {
                            let mut v = CVector::zeros(cols * d);
                            for j in 0..cols {
                                v[j * d + k] = r.representatives[(j, c)];
                            }
                            reps.push(v);
                        }
                    }
                    if !reps.is_empty() {
                        total.representatives = CMatrix::from_columns(&reps);
                    }
                    total
                })
                .collect())
        }
        _ => {
            let pd = p.to_dense(d);
            let qd = q.to_dense(d);
            check_shapes(&pd, &qd)?;
            let residual = complex_residual(&pd, &qd);
            if residual > structure_tol {
                return Err(Error::NotAComplex { residual });
            }
            let ps = FullSvd::new(&pd);
            let qs = FullSvd::new(&qd);
            Ok(policies
                .iter()
                .map(|policy| {
                    cohomology_with(
                        &ps,
                        &qs,
                        policy.threshold(ps.sigma_max()),
                        policy.threshold(qs.sigma_max()),
                        pd.ncols(),
                    )
                })
                .collect())
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelCohomology {
    #[serde(with = "crate::spectral::rational_serde")]
    pub lambda: Rational,
    pub lambda_f64: f64,
    pub eigenspace_dim: usize,
    pub kernel_dim: usize,
    pub rank_q: usize,
    pub h: usize,
    /// h at the rank tolerance ×10 and ÷10.
    pub h_coarse: usize,
    pub h_fine: usize,
    #[serde(skip)]
    pub representatives: CMatrix,
}

impl LevelCohomology {
    pub fn tolerance_sensitive(&self) -> bool {
        self.h != self.h_coarse || self.h != self.h_fine
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyTable {
    pub structure: String,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub cutoff: f64,
    pub levels: Vec<LevelCohomology>,
    pub total: usize,
    pub nonvanishing_levels: usize,
    /// Largest level with nonzero cohomology: every enumerated level above it vanishes.
    #[serde(serialize_with = "crate::spectral::rational_serde::option")]
    pub largest_nonvanishing: Option<Rational>,
    #[serde(serialize_with = "crate::spectral::rational_serde::vec")]
    pub sensitive_levels: Vec<Rational>,
}

impl CohomologyTable {
    pub fn is_tolerance_sensitive(&self) -> bool {
        !self.sensitive_levels.is_empty()
    }
}

/// Per-level cohomology of `ker P / ran Q` over a whole truncation.
///
/// Every rank decision is repeated at the rank tolerance ×10 and ÷10; levels
/// whose dimension moves are listed in `sensitive_levels`.
pub fn aggregate(p: &SymbolFamily, q: &SymbolFamily, tol: &Tolerances) -> Result<CohomologyTable> {
    let truncation = p.truncation().clone();
    if !truncation.same_levels(q.truncation()) {
        return Err(Error::TruncationMismatch);
    }
    if p.source_arity != q.target_arity {
        return Err(Error::ShapeMismatch(format!(
            "P has source arity {}, Q has target arity {}",
            p.source_arity, q.target_arity
        )));
    }
    let base = tol.rank_policy();
    let policies = [base, base.scaled(10.0), base.scaled(0.1)];
    let per_level: Vec<Result<LevelCohomology>> = (0..truncation.len())
        .into_par_iter()
        .map(|i| {
            let level = &truncation.levels[i];
            let mut results =
                level_of_families(p.level(i), q.level(i), level.dim, &policies, tol.structure)?;
            let fine = results.pop().expect("three policies");
            let coarse = results.pop().expect("three policies");
            let main = results.pop().expect("three policies");
            Ok(LevelCohomology {
                lambda: level.lambda,
                lambda_f64: level.lambda_f64,
                eigenspace_dim: level.dim,
                kernel_dim: main.kernel_dim,
                rank_q: main.rank_q,
                h: main.h,
                h_coarse: coarse.h,
                h_fine: fine.h,
                representatives: main.representatives,
            })
        })
        .collect();
    let levels = per_level.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(table_from_levels(label_of(p), None, None, truncation.cutoff, levels))
}

fn label_of(p: &SymbolFamily) -> String {
    format!("{:?}", p.provenance)
}

fn table_from_levels(
    structure: String,
    p: Option<usize>,
    q: Option<usize>,
    cutoff: f64,
    levels: Vec<LevelCohomology>,
) -> CohomologyTable {
    let total = levels.iter().map(|l| l.h).sum();
    let nonvanishing_levels = levels.iter().filter(|l| l.h > 0).count();
    let largest_nonvanishing = levels.iter().rev().find(|l| l.h > 0).map(|l| l.lambda);
    let sensitive_levels = levels
        .iter()
        .filter(|l| l.tolerance_sensitive())
        .map(|l| l.lambda)
        .collect();
    CohomologyTable {
        structure,
        p,
        q,
        cutoff,
        levels,
        total,
        nonvanishing_levels,
        largest_nonvanishing,
        sensitive_levels,
    }
}

/// The pair `(d′: (p,q) → (p,q+1), d′: (p,q−1) → (p,q))` of a frame, the
/// incoming operator being zero when `q = 0`.
pub fn dprime_pair(
    frame: &InvolutiveFrame,
    truncation: &Arc<SpectrumTruncation>,
    p: usize,
    q: usize,
) -> Result<(SymbolFamily, SymbolFamily)> {
    let outgoing = assemble_dprime(frame, truncation, p, q)?;
    let incoming = if q == 0 {
        SymbolFamily::zero(truncation.clone(), 0, binomial(frame.m, p))
    } else {
        assemble_dprime(frame, truncation, p, q - 1)?
    };
    Ok((outgoing, incoming))
}

/// Cohomology table of the d′ complex of a frame in bidegree (p,q).
pub fn dprime_cohomology(
    frame: &InvolutiveFrame,
    truncation: &Arc<SpectrumTruncation>,
    p: usize,
    q: usize,
    tol: &Tolerances,
) -> Result<CohomologyTable> {
    let (outgoing, incoming) = dprime_pair(frame, truncation, p, q)?;
    let mut table = aggregate(&outgoing, &incoming, tol)?;
    table.p = Some(p);
    table.q = Some(q);
    table.structure = format!("d' ({p},{q})");
    Ok(table)
}

#[derive(Clone, Debug, Serialize)]
pub struct LeftInvarianceVerdict {
    pub p: usize,
    pub q: usize,
    pub cutoff: f64,
    /// Every cohomology class is represented at level 0 (h(λ) = 0 for λ ≠ 0).
    pub left_invariant: bool,
    #[serde(serialize_with = "crate::spectral::rational_serde::pairs")]
    pub violating_levels: Vec<(Rational, usize)>,
    pub scope: String,
}

pub fn left_invariance_check(
    frame: &InvolutiveFrame,
    truncation: &Arc<SpectrumTruncation>,
    p: usize,
    q: usize,
    tol: &Tolerances,
) -> Result<LeftInvarianceVerdict> {
    let table = dprime_cohomology(frame, truncation, p, q, tol)?;
    Ok(left_invariance_from_table(&table, p, q))
}

pub fn left_invariance_from_table(table: &CohomologyTable, p: usize, q: usize) -> LeftInvarianceVerdict {
    let violating_levels: Vec<(Rational, usize)> = table
        .levels
        .iter()
        .filter(|l| l.lambda != Rational::from_integer(0) && l.h > 0)
        .map(|l| (l.lambda, l.h))
        .collect();
    LeftInvarianceVerdict {
        p,
        q,
        cutoff: table.cutoff,
        left_invariant: violating_levels.is_empty(),
        violating_levels,
        scope: format!("at cutoff Λ={}", table.cutoff),
    }
}

#[derive(Clone, Debug)]
pub struct InjectivityProbe {
    /// True iff `a(λ) ∈ ran Q̂(λ)` at every level.
    pub trivial_class: bool,
    /// `(level index, relative least-squares residual)` for every support level.
    pub residuals: Vec<(usize, f64)>,
    /// Minimum-norm solution of `Q u = a`, supported on the support of `a`;
    /// present only for trivial classes.
    pub preimage: Option<TruncatedSequence>,
}

/// Decides level by level whether a P-closed sequence is Q-exact.
pub fn injectivity_probe(
    p: &SymbolFamily,
    q: &SymbolFamily,
    a: &TruncatedSequence,
    tol: &Tolerances,
) -> Result<InjectivityProbe> {
    let pa = apply(p, a)?;
    let truncation = a.truncation().clone();
    for (i, level) in truncation.levels.iter().enumerate() {
        let scale = 1.0 + p.level(i).frobenius() * vec_norm(a.at(i));
        let r = vec_norm(pa.at(i)) / scale;
        if r > tol.structure {
            return Err(Error::NotInKernel {
                lambda: level.lambda.to_string(),
                residual: r,
            });
        }
    }
    let mut preimage = TruncatedSequence::zeros(truncation.clone(), q.source_arity);
    let mut residuals = Vec::new();
    let mut trivial = true;
    let policy = tol.rank_policy();
    for i in a.support() {
        let d = truncation.levels[i].dim;
        let qd = q.level(i).to_dense(d);
        let svd = FullSvd::new(&qd);
        let x = svd.solve_above(a.at(i), policy.threshold(svd.sigma_max()));
        let r = vec_norm(&(&qd * &x - a.at(i))) / vec_norm(a.at(i));
        residuals.push((i, r));
        if r > tol.structure {
            trivial = false;
        }
        preimage.set(i, x)?;
    }
    Ok(InjectivityProbe {
        trivial_class: trivial,
        residuals,
        preimage: trivial.then_some(preimage),
    })
}
