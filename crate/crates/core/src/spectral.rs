//! Truncated Peter–Weyl data: eigenvalues of the Laplacian, orthonormal
//! eigenbases and the matrix of every basis vector field on each eigenspace.

mod su2;
mod torus;

use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{validate_algebra, LieAlgebra, LieAlgebraSpec};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ZERO};

pub use su2::spin_matrices;

pub type Rational = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "group")]
pub enum Backend {
    Torus { dims: usize },
    Su2,
}

impl Backend {
    /// The Lie algebra whose real basis the symbols are expressed in.
    pub fn algebra(&self) -> LieAlgebra {
        let spec = match self {
            Backend::Torus { dims } => LieAlgebraSpec::abelian(*dims),
            Backend::Su2 => LieAlgebraSpec::su2(),
        };
        validate_algebra(spec).expect("built-in algebras are valid")
    }

    pub fn algebra_dim(&self) -> usize {
        match self {
            Backend::Torus { dims } => *dims,
            Backend::Su2 => 3,
        }
    }

    pub fn id(&self) -> String {
        match self {
            Backend::Torus { dims } => format!("T{dims}"),
            Backend::Su2 => "SU2".to_string(),
        }
    }
}

/// A matrix acting on one eigenspace.
#[derive(Clone, Debug, PartialEq)]
pub enum LevelMatrix {
    Diagonal(Vec<C64>),
    Dense(CMatrix),
}

impl LevelMatrix {
    pub fn dim(&self) -> usize {
        match self {
            LevelMatrix::Diagonal(d) => d.len(),
            LevelMatrix::Dense(m) => m.nrows(),
        }
    }

    pub fn to_dense(&self) -> CMatrix {
        match self {
            LevelMatrix::Diagonal(d) => CMatrix::from_diagonal(&nalgebra::DVector::from_vec(d.clone())),
            LevelMatrix::Dense(m) => m.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LevelLabels {
    /// Lattice vectors `k ∈ ℤⁿ`, stored row-major.
    Lattice { n: usize, k: Vec<i64> },
    /// Matrix elements `√d·ξ_jk` of the spin-l representation, `two_l = 2l`;
    /// basis index `k·(2l+1) + j`.
    Spin { two_l: u32 },
}

#[derive(Clone, Debug)]
enum FieldSymbols {
    Lattice,
    Dense(Vec<CMatrix>),
}

/// One eigenvalue of the Laplacian with its truncated eigenspace data.
#[derive(Clone, Debug)]
pub struct EigenLevel {
    pub lambda: Rational,
    pub lambda_f64: f64,
    pub dim: usize,
    pub labels: LevelLabels,
    fields: FieldSymbols,
}

impl EigenLevel {
    pub fn lattice_vector(&self, idx: usize) -> Option<&[i64]> {
        match &self.labels {
            LevelLabels::Lattice { n, k } => Some(&k[idx * n..(idx + 1) * n]),
            LevelLabels::Spin { .. } => None,
        }
    }

    /// Human-readable label of basis vector `idx`.
    pub fn label(&self, idx: usize) -> String {
        match &self.labels {
            LevelLabels::Lattice { .. } => {
                let k = self.lattice_vector(idx).unwrap_or(&[]);
                let parts: Vec<String> = k.iter().map(i64::to_string).collect();
                format!("k=({})", parts.join(","))
            }
            LevelLabels::Spin { two_l } => {
                let d = *two_l as usize + 1;
                let l = Rational::new(i64::from(*two_l), 2);
                format!("l={l},j={},k={}", idx % d + 1, idx / d + 1)
            }
        }
    }

    /// Matrix of the real basis field `X_a` on this eigenspace.
    pub fn vector_field_symbol(&self, a: usize) -> LevelMatrix {
        match (&self.fields, &self.labels) {
            (FieldSymbols::Lattice, LevelLabels::Lattice { n, k }) => LevelMatrix::Diagonal(
                (0..self.dim)
                    .map(|i| C64::new(0.0, k[i * n + a] as f64))
                    .collect(),
            ),
            (FieldSymbols::Dense(m), _) => LevelMatrix::Dense(m[a].clone()),
            _ => unreachable!("lattice symbols always carry lattice labels"),
        }
    }

    /// Matrix of `Σ_a coeffs[a]·X_a` on this eigenspace.
    pub fn complex_field_symbol(&self, coeffs: &[C64]) -> LevelMatrix {
        match (&self.fields, &self.labels) {
            (FieldSymbols::Lattice, LevelLabels::Lattice { n, k }) => LevelMatrix::Diagonal(
                (0..self.dim)
                    .map(|i| {
                        let mut z = ZERO;
                        for (a, &ca) in coeffs.iter().enumerate() {
                            if ca != ZERO {
                                z += ca * C64::new(0.0, k[i * n + a] as f64);
                            }
                        }
                        z
                    })
                    .collect(),
            ),
            (FieldSymbols::Dense(m), _) => {
                let mut out = CMatrix::zeros(self.dim, self.dim);
                for (a, &ca) in coeffs.iter().enumerate() {
                    if ca != ZERO {
                        out += &m[a] * ca;
                    }
                }
                LevelMatrix::Dense(out)
            }
            _ => unreachable!("lattice symbols always carry lattice labels"),
        }
    }
}

/// All eigenvalues `λ ≤ Λ` of one backend, strictly increasing.
#[derive(Debug)]
pub struct SpectrumTruncation {
    pub backend: Backend,
    pub cutoff: f64,
    pub levels: Vec<EigenLevel>,
    /// `Σ_{λ≠0} d_λ·λ^{−2N}` over the enumerated levels.
    pub weyl_partial_sum: f64,
}

impl SpectrumTruncation {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn level(&self, lambda: Rational) -> Result<&EigenLevel> {
        self.levels
            .binary_search_by(|l| l.lambda.cmp(&lambda))
            .map(|i| &self.levels[i])
            .map_err(|_| Error::UnknownLevel(lambda.to_string()))
    }

    pub fn total_dim(&self) -> usize {
        self.levels.iter().map(|l| l.dim).sum()
    }

    /// True iff both truncations enumerate the same levels with the same dimensions.
    pub fn same_levels(&self, other: &SpectrumTruncation) -> bool {
        self.backend == other.backend
            && self.levels.len() == other.levels.len()
            && self
                .levels
                .iter()
                .zip(&other.levels)
                .all(|(a, b)| a.lambda == b.lambda && a.dim == b.dim)
    }
}

pub fn enumerate_levels(backend: Backend, cutoff: f64) -> Result<Arc<SpectrumTruncation>> {
    if !(cutoff >= 0.0) {
        return Err(Error::NegativeCutoff(cutoff));
    }
    let levels = match backend {
        Backend::Torus { dims } => {
            if dims == 0 {
                return Err(Error::InvalidInput("torus dimension must be positive".into()));
            }
            torus::levels(dims, cutoff)
        }
        Backend::Su2 => su2::levels(cutoff),
    };
    let two_n = 2 * backend.algebra_dim() as i32;
    let weyl_partial_sum = levels
        .iter()
        .filter(|l| !l.lambda.is_zero())
        .map(|l| l.dim as f64 * l.lambda_f64.powi(-two_n))
        .sum();
    Ok(Arc::new(SpectrumTruncation {
        backend,
        cutoff,
        levels,
        weyl_partial_sum,
    }))
}

/// Symbol of basis field `a` at the level with eigenvalue `lambda`.
pub fn vector_field_symbol(
    truncation: &SpectrumTruncation,
    lambda: Rational,
    a: usize,
) -> Result<LevelMatrix> {
    if a >= truncation.backend.algebra_dim() {
        return Err(Error::InvalidInput(format!("no basis field with index {a}")));
    }
    Ok(truncation.level(lambda)?.vector_field_symbol(a))
}

/// Serializes eigenvalues as `"num/den"` strings (`"num"` for integers).
pub mod rational_serde {
    use super::Rational;
    use serde::ser::{SerializeSeq, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn option<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&r.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn vec<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&r.to_string())?;
        }
        seq.end()
    }

    pub fn pairs<S: Serializer>(v: &[(Rational, usize)], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for (r, h) in v {
            seq.serialize_element(&(r.to_string(), h))?;
        }
        seq.end()
    }
}

fn rational_f64(r: Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
