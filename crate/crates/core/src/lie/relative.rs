use serde::Serialize;

use super::ce::{ce_cohomology, ce_differential, insert_sorted};
use super::module::{ComplexLieAlgebra, GModule};
use crate::algebra::{binomial, subset_rank, subsets};
use crate::error::{Error, Result};
use crate::linalg::{
    frobenius, kernel_basis, kron, orthonormal_complement, rank, vec_norm, CMatrix, CVector,
    RankPolicy, Tolerances, C64, ZERO,
};

/// A basis of g adapted to a subalgebra h: the h generators followed by
/// standard basis vectors chosen greedily in index order.
#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    pub k: usize,
    /// Columns are the basis vectors in the original coordinates.
    pub basis: CMatrix,
    /// `brackets[(a·n + b)·n + c]`: component `c` of `[F_a, F_b]` in the adapted basis.
    pub brackets: Vec<C64>,
}

impl AdaptedBasis {
    pub fn new(g: &ComplexLieAlgebra, h: &[Vec<C64>], tol: &Tolerances) -> Result<Self> {
        let n = g.dim;
        let k = h.len();
        if h.iter().any(|v| v.len() != n) {
            return Err(Error::InvalidInput("subalgebra generator has wrong length".into()));
        }
        let policy = tol.rank_policy();
        let hm = CMatrix::from_fn(n, k, |i, j| h[j][i]);
        if rank(&hm, policy) < k {
            return Err(Error::DependentGenerators);
        }
        let span = crate::linalg::range_basis(&hm, policy);
        let mut worst: f64 = 0.0;
        for a in 0..k {
            for b in a + 1..k {
                let v = CVector::from_vec(g.bracket(&h[a], &h[b]));
                worst = worst.max(vec_norm(&(&v - &span * (span.adjoint() * &v))));
            }
        }
        if worst > tol.structure {
            return Err(Error::NotASubalgebra { residual: worst });
        }
        let mut basis = hm;
        let mut current = k;
        for i in 0..n {
            if basis.ncols() == n {
                break;
            }
            let c = basis.ncols();
            let mut trial = basis.clone().insert_column(c, ZERO);
            trial[(i, c)] = C64::new(1.0, 0.0);
            let r = rank(&trial, policy);
            if r > current {
                basis = trial;
                current = r;
            }
        }
        let dual = basis.clone().try_inverse().ok_or(Error::DependentGenerators)?;
        let cols: Vec<Vec<C64>> = (0..n).map(|j| basis.column(j).iter().copied().collect()).collect();
        let mut brackets = vec![ZERO; n * n * n];
        for a in 0..n {
            for b in 0..n {
                let coords = &dual * CVector::from_vec(g.bracket(&cols[a], &cols[b]));
                for c in 0..n {
                    brackets[(a * n + b) * n + c] = coords[c];
                }
            }
        }
        Ok(Self { k, basis, brackets })
    }

    pub fn bracket(&self, a: usize, b: usize, c: usize) -> C64 {
        let n = self.basis.ncols();
        self.brackets[(a * n + b) * n + c]
    }

    /// The subalgebra h with its structure constants in the generator basis.
    pub fn subalgebra(&self) -> ComplexLieAlgebra {
        let k = self.k;
        let mut c = vec![ZERO; k * k * k];
        for a in 0..k {
            for b in 0..k {
                for d in 0..k {
                    c[(a * k + b) * k + d] = self.bracket(a, b, d);
                }
            }
        }
        ComplexLieAlgebra { dim: k, c }
    }
}

/// Scalar cochains in `C^{p+q}(g)` that vanish whenever `q+1` arguments lie in h,
/// as orthonormal columns indexed by sorted `(p+q)`-subsets.
fn filtration_scalar(n: usize, h: &[Vec<C64>], p: usize, q: i64, policy: RankPolicy) -> CMatrix {
    let k = h.len();
    if q < 0 {
        return CMatrix::zeros(binomial(n, p), 0);
    }
    let q = q as usize;
    let degree = p + q;
    let cols = subsets(n, degree);
    if p == 0 {
        return CMatrix::identity(cols.len(), cols.len());
    }
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for a in subsets(k, q + 1) {
        for b in subsets(n, p - 1) {
            // argument vectors h_{A_1}, …, h_{A_{q+1}}, X_{B_1}, …, X_{B_{p−1}}
            let w = CMatrix::from_fn(n, degree, |i, j| {
                if j < a.len() {
                    h[a[j]][i]
                } else if b[j - a.len()] == i {
                    C64::new(1.0, 0.0)
                } else {
                    ZERO
                }
            });
            let row = cols
                .iter()
                .map(|s| CMatrix::from_fn(degree, degree, |r, c| w[(s[r], c)]).determinant())
                .collect();
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return CMatrix::identity(cols.len(), cols.len());
    }
    let e = CMatrix::from_fn(rows.len(), cols.len(), |i, j| rows[i][j]);
    kernel_basis(&e, policy)
}

#[derive(Clone, Debug, Serialize)]
pub struct RelativeComplex {
    pub p: usize,
    /// `dim U^{p,q}` for `q = 0..=dim h`.
    pub u_dims: Vec<usize>,
    /// `dim H^{p,q}` for `q = 0..=dim h`.
    pub dims: Vec<usize>,
    /// Largest `‖d′_{q+1} d′_q‖ / (1 + ‖d′_{q+1}‖‖d′_q‖)`.
    pub d_squared_residual: f64,
    pub euler_cochains: i64,
    pub euler_cohomology: i64,
    #[serde(skip)]
    pub differentials: Vec<CMatrix>,
}

/// Relative cohomology `H^{p,q}_h(g; V)`, `q = 0..=dim h`.
pub fn relative_cohomology(
    g: &ComplexLieAlgebra,
    h: &[Vec<C64>],
    module: &GModule,
    p: usize,
    tol: &Tolerances,
) -> Result<RelativeComplex> {
    AdaptedBasis::new(g, h, tol)?;
    let n = g.dim;
    let k = h.len();
    let d = module.dim;
    let policy = tol.rank_policy();
    let identity = CMatrix::identity(d, d);

    // quotient bases W_q = N^{p,q} ⊖ N^{p+1,q−1}, q = 0..=k+1
    let mut w: Vec<CMatrix> = Vec::with_capacity(k + 2);
    for q in 0..=k + 1 {
        if p + q > n {
            w.push(CMatrix::zeros(0, 0));
            continue;
        }
        let big = filtration_scalar(n, h, p, q as i64, policy);
        let small = filtration_scalar(n, h, p + 1, q as i64 - 1, policy);
        let u = orthonormal_complement(&small, &big, 1e-8);
        w.push(kron(&u, &identity));
    }
    let mut differentials = Vec::with_capacity(k + 1);
    for q in 0..=k {
        let (src, dst) = (&w[q], &w[q + 1]);
        if p + q > n || src.ncols() == 0 || dst.ncols() == 0 {
            differentials.push(CMatrix::zeros(dst.ncols(), src.ncols()));
            continue;
        }
        let full = ce_differential(g, module, p + q)?;
        differentials.push(dst.adjoint() * full * src);
    }
    let mut residual: f64 = 0.0;
    for q in 0..k {
        let (a, b) = (&differentials[q + 1], &differentials[q]);
        if a.ncols() > 0 && a.nrows() > 0 && b.ncols() > 0 {
            residual = residual.max(frobenius(&(a * b)) / (1.0 + frobenius(a) * frobenius(b)));
        }
    }
    let ranks: Vec<usize> = differentials.iter().map(|m| rank(m, policy)).collect();
    let u_dims: Vec<usize> = (0..=k).map(|q| w[q].ncols()).collect();
    let dims: Vec<usize> = (0..=k)
        .map(|q| {
            let incoming = if q == 0 { 0 } else { ranks[q - 1] };
            u_dims[q].saturating_sub(ranks[q] + incoming)
        })
        .collect();
    let alt = |v: &[usize]| -> i64 {
        v.iter()
            .enumerate()
            .map(|(q, &x)| if q % 2 == 0 { x as i64 } else { -(x as i64) })
            .sum()
    };
    Ok(RelativeComplex {
        p,
        euler_cochains: alt(&u_dims),
        euler_cohomology: alt(&dims),
        u_dims,
        dims,
        d_squared_residual: residual,
        differentials,
    })
}

/// The h-module `C^p(g/h; V)` of alternating maps on the quotient, with
/// `(Lω)(y_1, …) = L·ω(y_1, …) − Σ_j ω(…, [L, y_j] mod h, …)`.
pub fn quotient_module(adapted: &AdaptedBasis, module: &GModule, p: usize) -> Result<GModule> {
    let n = adapted.basis.ncols();
    let k = adapted.k;
    let m = n - k;
    let d = module.dim;
    let h = adapted.subalgebra();
    let ts = subsets(m, p);
    let size = ts.len() * d;
    let mut action = Vec::with_capacity(k);
    for a in 0..k {
        let coeffs: Vec<C64> = adapted.basis.column(a).iter().copied().collect();
        let rho = module.act(&coeffs);
        let mut mat = CMatrix::zeros(size, size);
        for (ti, t) in ts.iter().enumerate() {
            let mut block = mat.view_mut((ti * d, ti * d), (d, d));
            block += &rho;
            for j in 0..t.len() {
                let rest: Vec<usize> = t.iter().copied().filter(|&x| x != t[j]).collect();
                for s in 0..m {
                    let coef = adapted.bracket(a, k + t[j], k + s);
                    if coef.norm() == 0.0 {
                        continue;
                    }
                    // ω(y_1, …, M_s at slot j, …): move M_s to the front, then sort it in
                    let Some((sign, sorted)) = insert_sorted(&rest, s) else {
                        continue;
                    };
                    let front = if j % 2 == 0 { 1.0 } else { -1.0 };
                    let si = subset_rank(&sorted, m);
                    for v in 0..d {
                        mat[(ti * d + v, si * d + v)] -= coef * (sign * front);
                    }
                }
            }
        }
        action.push(mat);
    }
    GModule::new(&h, format!("C^{p}(g/h; {})", module.label), action)
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiCheck {
    pub p: usize,
    pub q: usize,
    pub relative_dim: usize,
    pub subalgebra_dim: usize,
    pub equal: bool,
}

/// Compares `dim H^{p,q}_h(g; V)` with `dim H^q(h; C^p(g/h; V))`.
pub fn phi_dimension_check(
    g: &ComplexLieAlgebra,
    h: &[Vec<C64>],
    module: &GModule,
    p: usize,
    q: usize,
    tol: &Tolerances,
) -> Result<PhiCheck> {
    let adapted = AdaptedBasis::new(g, h, tol)?;
    if q > adapted.k {
        return Err(Error::DegreeOutOfRange { r: q, dim: adapted.k });
    }
    let rel = relative_cohomology(g, h, module, p, tol)?;
    let relative_dim = rel.dims[q];
    let w = quotient_module(&adapted, module, p)?;
    let sub = ce_cohomology(&adapted.subalgebra(), &w, tol.rank_policy())?;
    Ok(PhiCheck {
        p,
        q,
        relative_dim,
        subalgebra_dim: sub[q],
        equal: relative_dim == sub[q],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{validate_algebra, LieAlgebraSpec};
    use crate::linalg::ONE;

    fn su2() -> ComplexLieAlgebra {
        ComplexLieAlgebra::complexify(&validate_algebra(LieAlgebraSpec::su2()).unwrap())
    }

    fn unit(n: usize, i: usize) -> Vec<C64> {
        (0..n).map(|j| if i == j { ONE } else { ZERO }).collect()
    }

    #[test]
    fn full_subalgebra_is_absolute() {
        let g = su2();
        let h: Vec<_> = (0..3).map(|i| unit(3, i)).collect();
        let tol = Tolerances::default();
        for v in [GModule::trivial(&g, 1), GModule::spin(&g, 1).unwrap()] {
            let rel = relative_cohomology(&g, &h, &v, 0, &tol).unwrap();
            assert_eq!(rel.dims, ce_cohomology(&g, &v, tol.rank_policy()).unwrap());
            for q in 0..=3 {
                assert!(phi_dimension_check(&g, &h, &v, 0, q, &tol).unwrap().equal);
            }
        }
    }

    #[test]
    fn beyond_codimension_everything_vanishes() {
        let g = su2();
        let h = vec![vec![ZERO, ONE, C64::new(0.0, 1.0)]];
        let v = GModule::trivial(&g, 1);
        let rel = relative_cohomology(&g, &h, &v, 3, &Tolerances::default()).unwrap();
        assert_eq!(rel.u_dims, vec![0, 0]);
        assert_eq!(rel.dims, vec![0, 0]);
    }

    #[test]
    fn quotient_dimensions_and_euler() {
        let g = su2();
        let h = vec![vec![ZERO, ONE, C64::new(0.0, 1.0)]];
        let tol = Tolerances::default();
        let v = GModule::spin(&g, 2).unwrap();
        for p in 0..=2 {
            let rel = relative_cohomology(&g, &h, &v, p, &tol).unwrap();
            for q in 0..=1 {
                assert_eq!(rel.u_dims[q], binomial(1, q) * binomial(2, p) * 3);
            }
            assert!(rel.d_squared_residual <= 1e-10);
            assert_eq!(rel.euler_cochains, rel.euler_cohomology);
        }
    }

    #[test]
    fn holomorphic_torus_phi_check() {
        let g = ComplexLieAlgebra::abelian(2);
        let h = vec![vec![ONE, C64::new(0.0, 1.0)]];
        let check =
            phi_dimension_check(&g, &h, &GModule::trivial(&g, 1), 1, 0, &Tolerances::default())
                .unwrap();
        assert!(check.equal, "{check:?}");
    }

    #[test]
    fn non_subalgebra_rejected() {
        let g = su2();
        let h = vec![unit(3, 1), unit(3, 2)];
        assert!(matches!(
            relative_cohomology(&g, &h, &GModule::trivial(&g, 1), 0, &Tolerances::default()),
            Err(Error::NotASubalgebra { .. })
        ));
    }
}
