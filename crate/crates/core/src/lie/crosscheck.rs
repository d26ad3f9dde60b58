use std::sync::Arc;

use serde::Serialize;

use super::module::{ComplexLieAlgebra, GModule};
use super::relative::relative_cohomology;
use crate::algebra::InvolutiveFrame;
use crate::cohomology::dprime_cohomology;
use crate::error::Result;
use crate::linalg::Tolerances;
use crate::spectral::{Rational, SpectrumTruncation};

#[derive(Clone, Debug, Serialize)]
pub struct CrossRow {
    #[serde(with = "crate::spectral::rational_serde")]
    pub lambda: Rational,
    pub q: usize,
    pub spectral: usize,
    pub relative: usize,
    pub agree: bool,
}

/// Per-level comparison of the d′ cohomology in bidegree (p,q) with the
/// relative cohomology `H^{p,q}_𝔳(g; E_λ)` computed from the eigenspace as a module.
pub fn spectral_vs_relative(
    frame: &InvolutiveFrame,
    truncation: &Arc<SpectrumTruncation>,
    p: usize,
    q: usize,
    tol: &Tolerances,
) -> Result<Vec<CrossRow>> {
    let g = ComplexLieAlgebra::complexify(frame.algebra());
    let h: Vec<_> = (0..frame.n).map(|j| frame.l_vector(j)).collect();
    let table = dprime_cohomology(frame, truncation, p, q, tol)?;
    table
        .levels
        .iter()
        .zip(&truncation.levels)
        .map(|(row, level)| {
            let module = GModule::from_level(&g, level)?;
            let relative = relative_cohomology(&g, &h, &module, p, tol)?.dims[q];
            Ok(CrossRow {
                lambda: row.lambda,
                q,
                spectral: row.h,
                relative,
                agree: row.h == relative,
            })
        })
        .collect()
}
