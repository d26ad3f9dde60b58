use serde::Serialize;

use super::spec::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, Tolerances, C64, ZERO};

/// A basis `L_1..L_n` of an involutive subalgebra 𝔳 of the complexified Lie
/// algebra, completed to a basis of the whole algebra by `M_1..M_m`.
#[derive(Clone, Debug, Serialize)]
pub struct InvolutiveFrame {
    #[serde(skip)]
    algebra: LieAlgebra,
    pub n: usize,
    pub m: usize,
    /// Columns are `L_1..L_n, M_1..M_m` in coordinates of the real basis.
    #[serde(skip)]
    basis: CMatrix,
    /// Rows are the dual forms `τ_1..τ_n, ζ_1..ζ_m`.
    #[serde(skip)]
    dual: CMatrix,
    #[serde(skip)]
    brackets: Vec<C64>,
    /// Real-basis indices whose coordinate vectors completed the frame.
    pub complement_indices: Vec<usize>,
}

fn bracket(algebra: &LieAlgebra, u: &[C64], v: &[C64]) -> Vec<C64> {
    let n = algebra.dim();
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
                let ck = algebra.c(i, j, k);
                if ck != 0.0 {
                    *o += uv * ck;
                }
            }
        }
    }
    out
}

pub fn build_frame(algebra: &LieAlgebra, generators: &[Vec<C64>]) -> Result<InvolutiveFrame> {
    build_frame_with(algebra, generators, &Tolerances::default())
}

pub fn build_frame_with(
    algebra: &LieAlgebra,
    generators: &[Vec<C64>],
    tol: &Tolerances,
) -> Result<InvolutiveFrame> {
    let dim = algebra.dim();
    let n = generators.len();
    if n > dim {
        return Err(Error::DependentGenerators);
    }
    if let Some(bad) = generators.iter().find(|g| g.len() != dim) {
        return Err(Error::InvalidInput(format!(
            "generator has {} coefficients, algebra dimension is {dim}",
            bad.len()
        )));
    }
    let policy = tol.rank_policy();
    let l = CMatrix::from_fn(dim, n, |i, j| generators[j][i]);
    if linalg::rank(&l, policy) < n {
        return Err(Error::DependentGenerators);
    }

    let span = linalg::range_basis(&l, policy);
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in a + 1..n {
            let v = CVector::from_vec(bracket(algebra, &generators[a], &generators[b]));
            let outside = &v - &span * (span.adjoint() * &v);
            worst = worst.max(linalg::vec_norm(&outside));
        }
    }
    if worst > tol.structure {
        return Err(Error::NotASubalgebra { residual: worst });
    }

    let mut basis = l;
    let mut complement_indices = Vec::new();
    let mut current_rank = n;
    for i in 0..dim {
        if basis.ncols() == dim {
            break;
        }
        let k = basis.ncols();
        let trial = basis.clone().insert_column(k, ZERO);
        let mut trial = trial;
        trial[(i, k)] = C64::new(1.0, 0.0);
        let r = linalg::rank(&trial, policy);
        if r > current_rank {
            basis = trial;
            current_rank = r;
            complement_indices.push(i);
        }
    }
    let dual = basis
        .clone()
        .try_inverse()
        .ok_or(Error::DependentGenerators)?;

    let mut brackets = vec![ZERO; dim * dim * dim];
    let cols: Vec<Vec<C64>> = (0..dim)
        .map(|j| basis.column(j).iter().copied().collect())
        .collect();
    for a in 0..dim {
        for b in 0..dim {
            let v = CVector::from_vec(bracket(algebra, &cols[a], &cols[b]));
            let coords = &dual * v;
            for c in 0..dim {
                brackets[(a * dim + b) * dim + c] = coords[c];
            }
        }
    }

    Ok(InvolutiveFrame {
        algebra: algebra.clone(),
        n,
        m: dim - n,
        basis,
        dual,
        brackets,
        complement_indices,
    })
}

impl InvolutiveFrame {
    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.n + self.m
    }

    /// Coefficients of frame vector `a` (L's first, then M's) in the real basis.
    pub fn frame_vector(&self, a: usize) -> Vec<C64> {
        self.basis.column(a).iter().copied().collect()
    }

    pub fn l_vector(&self, j: usize) -> Vec<C64> {
        self.frame_vector(j)
    }

    pub fn m_vector(&self, s: usize) -> Vec<C64> {
        self.frame_vector(self.n + s)
    }

    pub fn basis_matrix(&self) -> &CMatrix {
        &self.basis
    }

    pub fn dual_matrix(&self) -> &CMatrix {
        &self.dual
    }

    /// Component along frame vector `c` of `[F_a, F_b]`.
    pub fn bracket(&self, a: usize, b: usize, c: usize) -> C64 {
        let d = self.dim();
        self.brackets[(a * d + b) * d + c]
    }

    /// Pairing matrix `⟨dual form a, frame vector b⟩`; the identity up to rounding.
    pub fn dual_pairing(&self) -> CMatrix {
        &self.dual * &self.basis
    }
}

/// True iff 𝔳 + 𝔳̄ is the whole complexified algebra.
pub fn check_ellipticity(frame: &InvolutiveFrame) -> bool {
    let dim = frame.dim();
    let n = frame.n;
    let stacked = CMatrix::from_fn(dim, 2 * n, |i, j| {
        if j < n {
            frame.basis[(i, j)]
        } else {
            frame.basis[(i, j - n)].conj()
        }
    });
    linalg::rank(&stacked, Tolerances::default().rank_policy()) == dim
}
