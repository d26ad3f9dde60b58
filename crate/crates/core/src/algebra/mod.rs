//! Lie algebra input, involutive frames and the constant part of the d′ complex.

mod dprime;
mod frame;
mod spec;
mod wedge;

pub use dprime::{dprime_structure_constants, DPrimeConstants};
pub use frame::{build_frame, build_frame_with, check_ellipticity, InvolutiveFrame};
pub use spec::{
    check_ad_invariance, killing_form, validate_algebra, validate_algebra_with, AdInvariance, KillingForm, LieAlgebra,
    LieAlgebraSpec,
};
pub use wedge::{
    binomial, subset_rank, subsets, wedge_into_basis, FormIndex, MultiIndexBasis, Wedge,
};
