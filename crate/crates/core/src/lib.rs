//! Finite-dimensional models of left-invariant involutive structures on
//! compact Lie groups.
//!
//! Every operator is represented by its per-eigenvalue symbol matrices, so
//! cohomology, closed-range and hypoellipticity questions reduce to linear
//! algebra on the eigenspaces of the Laplacian, truncated at a cutoff.

pub mod algebra;
pub mod cohomology;
pub mod diagnostics;
pub mod error;
pub mod lie;
pub mod linalg;
pub mod numbers;
pub mod spectral;
pub mod suite;
pub mod symbol;

pub use error::{Error, Result};
