//! Dense complex linear algebra shared by every pipeline: singular value
//! decompositions, numerical rank, kernels, ranges and complements.

use nalgebra::{Complex, DMatrix, DVector};
use serde::Serialize;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Numerical thresholds used throughout the crate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Absolute tolerance for structure residuals (subalgebra closure, complex residuals).
    pub structure: f64,
    /// Absolute per-component tolerance for the Jacobi identity.
    pub jacobi: f64,
    /// Relative rank threshold, multiplied by the largest singular value.
    pub rank: f64,
    /// Absolute floor below which a singular value always counts as zero.
    pub rank_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            structure: 1e-10,
            jacobi: 1e-12,
            rank: 1e-9,
            rank_floor: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn with_rank(self, rank: f64) -> Self {
        Self { rank, ..self }
    }

    pub fn rank_policy(&self) -> RankPolicy {
        RankPolicy {
            rel: self.rank,
            abs: self.rank_floor,
        }
    }
}

/// Decides which singular values count as nonzero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankPolicy {
    pub rel: f64,
    pub abs: f64,
}

impl Default for RankPolicy {
    fn default() -> Self {
        Tolerances::default().rank_policy()
    }
}

impl RankPolicy {
    pub fn threshold(&self, sigma_max: f64) -> f64 {
        (self.rel * sigma_max).max(self.abs)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            rel: self.rel * factor,
            abs: self.abs,
        }
    }
}

/// Singular value decomposition with singular values sorted descending.
///
/// `v` always holds a full orthonormal basis of the domain, so the trailing
/// columns beyond the numerical rank span the kernel.
pub struct FullSvd {
    pub u: CMatrix,
    pub singular_values: Vec<f64>,
    pub v: CMatrix,
}

impl FullSvd {
    pub fn new(m: &CMatrix) -> Self {
        let (rows, cols) = m.shape();
        if rows == 0 || cols == 0 {
            return Self {
                u: CMatrix::zeros(rows, 0),
                singular_values: Vec::new(),
                v: CMatrix::identity(cols, cols),
            };
        }
        // pad with zero rows so that the decomposition returns a square V
        let padded = if rows < cols {
            let mut p = CMatrix::zeros(cols, cols);
            p.view_mut((0, 0), (rows, cols)).copy_from(m);
            p
        } else {
            m.clone()
        };
        let svd = padded.svd(true, true);
        let u_full = svd.u.expect("requested U");
        let v_t = svd.v_t.expect("requested V");
        let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
        let mut order: Vec<usize> = (0..sv.len()).collect();
        order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]).then(a.cmp(&b)));

        let k = sv.len().min(rows);
        let mut u = CMatrix::zeros(rows, k);
        let mut v = CMatrix::zeros(cols, cols);
        let mut singular_values = Vec::with_capacity(k);
        for (dst, &src) in order.iter().enumerate() {
            let col = v_t.row(src).adjoint();
            v.set_column(dst, &col);
            if dst < k {
                singular_values.push(sv[src]);
                u.set_column(dst, &u_full.column(src).rows(0, rows).into_owned());
            }
        }
        Self {
            u,
            singular_values,
            v,
        }
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn rank(&self, policy: RankPolicy) -> usize {
        self.rank_above(policy.threshold(self.sigma_max()))
    }

    pub fn rank_above(&self, threshold: f64) -> usize {
        self.singular_values
            .iter()
            .filter(|&&s| s > threshold)
            .count()
    }

    pub fn kernel(&self, policy: RankPolicy) -> CMatrix {
        self.kernel_above(policy.threshold(self.sigma_max()))
    }

    pub fn kernel_above(&self, threshold: f64) -> CMatrix {
        let r = self.rank_above(threshold);
        let n = self.v.ncols();
        self.v.columns(r, n - r).into_owned()
    }

    pub fn range(&self, policy: RankPolicy) -> CMatrix {
        self.range_above(policy.threshold(self.sigma_max()))
    }

    pub fn range_above(&self, threshold: f64) -> CMatrix {
        let r = self.rank_above(threshold);
        self.u.columns(0, r).into_owned()
    }

    /// Minimum-norm least-squares solution of `A x = b` ignoring singular
    /// values at or below `threshold`.
    pub fn solve_above(&self, b: &CVector, threshold: f64) -> CVector {
        let r = self.rank_above(threshold);
        let mut x = CVector::zeros(self.v.nrows());
        for i in 0..r {
            let coef = self.u.column(i).dotc(b) / C64::new(self.singular_values[i], 0.0);
            x += self.v.column(i) * coef;
        }
        x
    }
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

pub fn rank(m: &CMatrix, policy: RankPolicy) -> usize {
    let sv = singular_values(m);
    let thr = policy.threshold(sv.first().copied().unwrap_or(0.0));
    sv.iter().filter(|&&s| s > thr).count()
}

/// Orthonormal basis of the kernel, one column per kernel direction.
pub fn kernel_basis(m: &CMatrix, policy: RankPolicy) -> CMatrix {
    FullSvd::new(m).kernel(policy)
}

/// Orthonormal basis of the column space.
pub fn range_basis(m: &CMatrix, policy: RankPolicy) -> CMatrix {
    FullSvd::new(m).range(policy)
}

/// Orthonormal basis for the part of `within` orthogonal to `sub`.
///
/// Both arguments hold orthonormal columns; projected directions with norm
/// below `discard` are dropped.
pub fn orthonormal_complement(sub: &CMatrix, within: &CMatrix, discard: f64) -> CMatrix {
    let n = within.nrows();
    if within.ncols() == 0 {
        return CMatrix::zeros(n, 0);
    }
    let projected = if sub.ncols() == 0 {
        within.clone()
    } else {
        within - sub * (sub.adjoint() * within)
    };
    let svd = FullSvd::new(&projected);
    let keep = svd
        .singular_values
        .iter()
        .filter(|&&s| s > discard)
        .count();
    svd.u.columns(0, keep).into_owned()
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_norm(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Promotes a real matrix stored row-major to a complex one.
pub fn from_real_rows(rows: &[Vec<f64>]) -> CMatrix {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    CMatrix::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_wide_matrix_is_complete() {
        let m = CMatrix::from_row_slice(1, 3, &[ONE, ONE, ZERO]);
        let k = kernel_basis(&m, RankPolicy::default());
        assert_eq!(k.ncols(), 2);
        assert!(frobenius(&(&m * &k)) < 1e-12);
        let gram = k.adjoint() * &k;
        assert!(frobenius(&(gram - CMatrix::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn empty_shapes() {
        let m = CMatrix::zeros(0, 4);
        assert_eq!(kernel_basis(&m, RankPolicy::default()).ncols(), 4);
        assert_eq!(rank(&m, RankPolicy::default()), 0);
        let m = CMatrix::zeros(3, 0);
        assert_eq!(range_basis(&m, RankPolicy::default()).ncols(), 0);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let m = CMatrix::zeros(3, 3);
        assert_eq!(rank(&m, RankPolicy::default()), 0);
        assert_eq!(kernel_basis(&m, RankPolicy::default()).ncols(), 3);
    }

    #[test]
    fn complement_inside_subspace() {
        let within = CMatrix::identity(3, 2);
        let sub = CMatrix::from_column_slice(3, 1, &[c(0.6, 0.0), c(0.0, 0.8), ZERO]);
        let comp = orthonormal_complement(&sub, &within, 1e-8);
        assert_eq!(comp.ncols(), 1);
        assert!((sub.adjoint() * &comp)[(0, 0)].norm() < 1e-12);
    }
}
