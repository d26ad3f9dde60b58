use serde::Serialize;

use super::ce::ce_cohomology;
use super::module::{ComplexLieAlgebra, GModule};
use crate::error::Result;
use crate::linalg::{kernel_basis, rank, CMatrix, RankPolicy, C64, ONE, ZERO};

/// The Killing form `tr(ad X_a ad X_b)` of a complex Lie algebra.
pub fn complex_killing(g: &ComplexLieAlgebra) -> CMatrix {
    let n = g.dim;
    let ad = |a: usize| CMatrix::from_fn(n, n, |k, j| g.constant(a, j, k));
    let ads: Vec<CMatrix> = (0..n).map(ad).collect();
    CMatrix::from_fn(n, n, |a, b| (&ads[a] * &ads[b]).trace())
}

/// Orthonormal basis of `V^h = ∩ ker ρ(L)` over the given elements `L` of h.
pub fn invariants_subspace(module: &GModule, h: &[Vec<C64>], policy: RankPolicy) -> CMatrix {
    let d = module.dim;
    if h.is_empty() {
        return CMatrix::identity(d, d);
    }
    let mut stacked = CMatrix::from_element(d * h.len(), d, ZERO);
    for (a, l) in h.iter().enumerate() {
        stacked.view_mut((a * d, 0), (d, d)).copy_from(&module.act(l));
    }
    kernel_basis(&stacked, policy)
}

#[derive(Clone, Debug, Serialize)]
pub struct WhiteheadReport {
    pub module: String,
    pub semisimple: bool,
    pub killing_rank: usize,
    pub invariants_dim: usize,
    /// `dim H^r(h; V)` for `r = 0..=dim h`.
    pub dims: Vec<usize>,
    /// For semisimple h and V without invariants, `H^1` and `H^2` vanish.
    pub vanishing_expected: bool,
    pub consistent: bool,
}

pub fn whitehead_report(
    h: &ComplexLieAlgebra,
    module: &GModule,
    policy: RankPolicy,
) -> Result<WhiteheadReport> {
    let killing = complex_killing(h);
    let killing_rank = rank(&killing, policy);
    let semisimple = h.dim > 0 && killing_rank == h.dim;
    let basis: Vec<Vec<C64>> = (0..h.dim)
        .map(|i| (0..h.dim).map(|j| if i == j { ONE } else { ZERO }).collect())
        .collect();
    let invariants_dim = invariants_subspace(module, &basis, policy).ncols();
    let dims = ce_cohomology(h, module, policy)?;
    let vanishing_expected = semisimple && invariants_dim == 0;
    let low_vanish = dims.iter().skip(1).take(2).all(|&x| x == 0);
    Ok(WhiteheadReport {
        module: module.label.clone(),
        semisimple,
        killing_rank,
        invariants_dim,
        consistent: !vanishing_expected || (low_vanish && dims[0] == 0),
        dims,
        vanishing_expected,
    })
}
