use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_SENSITIVE: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] lieinv::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("report serialization failed: {0}")]
    Report(String),
}

impl CliError {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(_) | CliError::Config(_) => EXIT_VALIDATION,
            CliError::Io { .. } | CliError::Report(_) => EXIT_IO,
        }
    }

    /// Short machine-readable name of the failure.
    pub fn kind(&self) -> &'static str {
        use lieinv::Error as E;
        match self {
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::Report(_) => "report",
            CliError::Core(e) => match e {
                E::AntisymmetryViolation { .. } => "antisymmetry-violation",
                E::JacobiViolation { .. } => "jacobi-violation",
                E::NonPositiveMetric { .. } => "non-positive-metric",
                E::InvalidInput(_) => "invalid-input",
                E::NotASubalgebra { .. } => "not-a-subalgebra",
                E::DependentGenerators => "dependent-generators",
                E::BidegreeOutOfRange { .. } => "bidegree-out-of-range",
                E::TruncationMismatch => "truncation-mismatch",
                E::ShapeMismatch(_) => "shape-mismatch",
                E::ArityMismatch { .. } => "arity-mismatch",
                E::NegativeCutoff(_) => "negative-cutoff",
                E::UnknownLevel(_) => "unknown-level",
                E::NotAComplex { .. } => "not-a-complex",
                E::NotInKernel { .. } => "not-in-kernel",
                E::AllZero => "all-zero",
                E::InsufficientData { .. } => "insufficient-data",
                E::NoFailureCertificate => "no-failure-certificate",
                E::DegreeOutOfRange { .. } => "degree-out-of-range",
            },
        }
    }
}
