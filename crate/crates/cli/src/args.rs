use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "lieinv", version, about = "Symbol calculus for left-invariant complexes on T^n and SU(2)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Algebra, frame, ellipticity and semisimplicity summary.
    Describe,
    /// Eigenvalue levels and Weyl partial sums.
    Spectrum,
    /// d' cohomology tables per bidegree and left-invariance verdicts.
    Cohomology,
    /// Symbol lower bounds, estimate fits and witnesses.
    Diagnose,
    /// Chevalley-Eilenberg and relative cohomology with the cross-pipeline check.
    LieCohomology,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Describe => "describe",
            Command::Spectrum => "spectrum",
            Command::Cohomology => "cohomology",
            Command::Diagnose => "diagnose",
            Command::LieCohomology => "lie-cohomology",
        }
    }
}

/// Flags override the matching config entries.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Spectral backend: `torus` or `su2`.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Torus dimension.
    #[arg(long, global = true)]
    pub dims: Option<usize>,
    /// Structure preset: de-rham, cr, d, d1, d1+i*d2, d1+sqrt2*d2, d1+liouville*d2.
    #[arg(long, global = true)]
    pub structure: Option<String>,
    /// Single eigenvalue cutoff.
    #[arg(long, global = true, conflicts_with = "cutoffs")]
    pub cutoff: Option<f64>,
    /// Strictly increasing cutoff ladder, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub cutoffs: Option<Vec<f64>>,
    /// Bidegree `p,q`; repeat for several.
    #[arg(long, global = true)]
    pub bidegree: Vec<String>,
    /// `smooth` or `gevrey:S`.
    #[arg(long, global = true)]
    pub weight: Option<String>,
    /// `beurling` or `roumieu`.
    #[arg(long, global = true)]
    pub flavor: Option<String>,
    /// Relative rank tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory; reports go to stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include harmonic representatives in cohomology reports.
    #[arg(long, global = true)]
    pub emit_representatives: bool,
}
