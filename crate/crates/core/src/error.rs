use thiserror::Error;

/// Errors raised by the algebraic, spectral and cohomological pipelines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("structure constants are not antisymmetric at (i={i}, j={j}, k={k}): c[i][j][k]={value}, c[j][i][k]={mirror}")]
    AntisymmetryViolation {
        i: usize,
        j: usize,
        k: usize,
        value: f64,
        mirror: f64,
    },
    #[error("Jacobi identity fails for the triple (i={i}, j={j}, k={k}): residual {residual:e}")]
    JacobiViolation {
        i: usize,
        j: usize,
        k: usize,
        residual: f64,
    },
    #[error("metric is not symmetric positive-definite (smallest eigenvalue {min_eigenvalue:e}, asymmetry {asymmetry:e})")]
    NonPositiveMetric { min_eigenvalue: f64, asymmetry: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("generators do not span a subalgebra: bracket residual {residual:e} outside the span")]
    NotASubalgebra { residual: f64 },
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("bidegree ({p},{q}) out of range for m={m}, n={n}")]
    BidegreeOutOfRange { p: usize, q: usize, m: usize, n: usize },
    #[error("truncations do not match")]
    TruncationMismatch,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("cutoff must be nonnegative, got {0}")]
    NegativeCutoff(f64),
    #[error("level {0} is not part of this spectrum")]
    UnknownLevel(String),
    #[error("matrices do not form a complex: relative residual {residual:e}")]
    NotAComplex { residual: f64 },
    #[error("sequence is not in the kernel at level {lambda}: residual {residual:e}")]
    NotInKernel { lambda: String, residual: f64 },
    #[error("sequence vanishes at every level")]
    AllZero,
    #[error("insufficient data: need {needed} finite entries, found {found}")]
    InsufficientData { needed: usize, found: usize },
    #[error("no failure certificate: the symbol estimate holds at every enumerated level")]
    NoFailureCertificate,
    #[error("cochain degree {r} out of range for an algebra of dimension {dim}")]
    DegreeOutOfRange { r: usize, dim: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
