use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ZERO};
use crate::spectral::{spin_matrices, EigenLevel};

/// Homomorphism residual tolerance, relative to the size of the action.
const MODULE_TOL: f64 = 1e-9;

/// A complex Lie algebra given by structure constants in a fixed basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexLieAlgebra {
    pub dim: usize,
    /// `c[(i·dim + j)·dim + k]`: coefficient of `X_k` in `[X_i, X_j]`.
    pub c: Vec<C64>,
}

impl ComplexLieAlgebra {
    pub fn complexify(algebra: &LieAlgebra) -> Self {
        Self {
            dim: algebra.dim(),
            c: algebra.spec().c.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    pub fn abelian(dim: usize) -> Self {
        Self {
            dim,
            c: vec![ZERO; dim * dim * dim],
        }
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> C64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    /// `[u, v]` for coefficient vectors.
    pub fn bracket(&self, u: &[C64], v: &[C64]) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![ZERO; n];
        for i in 0..n {
            if u[i] == ZERO {
                continue;
            }
            for j in 0..n {
                if v[j] == ZERO {
                    continue;
                }
                let uv = u[i] * v[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let ck = self.constant(i, j, k);
                    if ck != ZERO {
                        *o += uv * ck;
                    }
                }
            }
        }
        out
    }
}

/// A finite-dimensional representation of a complex Lie algebra.
#[derive(Clone, Debug)]
pub struct GModule {
    pub label: String,
    pub dim: usize,
    /// `action[a]` is the matrix of basis element `a`.
    pub action: Vec<CMatrix>,
}

impl GModule {
    /// Checks `[ρ(X_i), ρ(X_j)] = Σ_k c_ij^k ρ(X_k)`.
    pub fn new(
        algebra: &ComplexLieAlgebra,
        label: impl Into<String>,
        action: Vec<CMatrix>,
    ) -> Result<Self> {
        if action.len() != algebra.dim {
            return Err(Error::InvalidInput(format!(
                "module has {} action matrices, algebra dimension is {}",
                action.len(),
                algebra.dim
            )));
        }
        let dim = action.first().map_or(0, CMatrix::nrows);
        if action.iter().any(|m| m.shape() != (dim, dim)) {
            return Err(Error::InvalidInput("action matrices must be square and equal-sized".into()));
        }
        let module = Self {
            label: label.into(),
            dim,
            action,
        };
        let residual = module.homomorphism_residual(algebra);
        let scale = 1.0 + module.action.iter().map(|m| m.camax()).fold(0.0, f64::max).powi(2);
        if residual > MODULE_TOL * scale {
            return Err(Error::InvalidInput(format!(
                "action is not a Lie algebra homomorphism (residual {residual:e})"
            )));
        }
        Ok(module)
    }

    pub fn homomorphism_residual(&self, algebra: &ComplexLieAlgebra) -> f64 {
        let n = algebra.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                let mut r = &self.action[i] * &self.action[j] - &self.action[j] * &self.action[i];
                for k in 0..n {
                    let c = algebra.constant(i, j, k);
                    if c != ZERO {
                        r -= &self.action[k] * c;
                    }
                }
                worst = worst.max(r.camax());
            }
        }
        worst
    }

    pub fn trivial(algebra: &ComplexLieAlgebra, dim: usize) -> Self {
        Self {
            label: format!("trivial({dim})"),
            dim,
            action: vec![CMatrix::zeros(dim, dim); algebra.dim],
        }
    }

    /// The spin-l representation of su(2) in the basis `[e_i, e_j] = ε_ijk e_k`.
    pub fn spin(algebra: &ComplexLieAlgebra, two_l: u32) -> Result<Self> {
        Self::new(algebra, format!("spin({two_l}/2)"), spin_matrices(two_l).to_vec())
    }

    /// The eigenspace `E_λ` with the action of the basis vector fields.
    pub fn from_level(algebra: &ComplexLieAlgebra, level: &EigenLevel) -> Result<Self> {
        let action = (0..algebra.dim)
            .map(|a| level.vector_field_symbol(a).to_dense())
            .collect();
        Self::new(algebra, format!("E({})", level.lambda), action)
    }

    /// Matrix of `Σ_a coeffs[a]·X_a`.
    pub fn act(&self, coeffs: &[C64]) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (a, &c) in coeffs.iter().enumerate() {
            if c != ZERO {
                out += &self.action[a] * c;
            }
        }
        out
    }
}
