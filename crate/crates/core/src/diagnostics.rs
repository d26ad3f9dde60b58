//! Singular-value data behind the closed-range and hypoellipticity
//! criteria, finite-cutoff estimate fits and counterexample witnesses.
//!
//! Nothing here decides an asymptotic property: every verdict is evidence at
//! the enumerated cutoffs, and the 5% / 10× thresholds are report conventions.

mod fit;
mod sigma;
mod witness;

pub use fit::{
    aghe_fit, estimate_certificate, estimate_check, l2_closed_range_report, ClosedRangeReport,
    ClosedRangeVerdict,
    EstimateCertificate, EstimateCheck, EstimateFit, Verdict,
};
pub use sigma::{min_perp_vector, sigma_sequence, SigmaEntry, SigmaSequence};
pub use witness::{
    construct_witness, PointCheck, Witness, WitnessKind, WitnessParams, WitnessVerification,
};
