//! Chevalley–Eilenberg cohomology, relative Lie algebra cohomology and the
//! checks that tie it to the spectral pipeline.

mod ce;
mod crosscheck;
mod module;
mod relative;
mod whitehead;

pub use ce::{ce_cohomology, ce_differential};
pub use crosscheck::{spectral_vs_relative, CrossRow};
pub use module::{ComplexLieAlgebra, GModule};
pub use relative::{
    phi_dimension_check, quotient_module, relative_cohomology, AdaptedBasis, PhiCheck,
    RelativeComplex,
};
pub use whitehead::{complex_killing, invariants_subspace, whitehead_report, WhiteheadReport};
