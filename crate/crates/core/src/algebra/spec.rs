use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Tolerances;

/// Raw, unchecked description of a real Lie algebra with an inner product.
///
/// `c[(i * dim + j) * dim + k]` is the coefficient of `X_k` in `[X_i, X_j]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LieAlgebraSpec {
    pub name: String,
    pub labels: Vec<String>,
    pub dim: usize,
    pub c: Vec<f64>,
    pub metric: Vec<Vec<f64>>,
}

impl LieAlgebraSpec {
    pub fn new(name: impl Into<String>, dim: usize) -> Self {
        let metric = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self {
            name: name.into(),
            labels: (1..=dim).map(|i| format!("X{i}")).collect(),
            dim,
            c: vec![0.0; dim * dim * dim],
            metric,
        }
    }

    /// The abelian algebra of the n-torus with coordinate fields `d1..dn`.
    pub fn abelian(n: usize) -> Self {
        let mut spec = Self::new(format!("R{n}"), n);
        spec.labels = (1..=n).map(|i| format!("d{i}")).collect();
        spec
    }

    /// su(2) with `[e_i, e_j] = ε_ijk e_k` and the identity metric.
    pub fn su2() -> Self {
        let mut spec = Self::new("su2", 3);
        spec.labels = vec!["e1".into(), "e2".into(), "e3".into()];
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            spec.set_bracket(i, j, k, 1.0);
        }
        spec
    }

    /// Sets `c[i][j][k] = value` and `c[j][i][k] = -value`.
    pub fn set_bracket(&mut self, i: usize, j: usize, k: usize, value: f64) {
        let n = self.dim;
        self.c[(i * n + j) * n + k] = value;
        self.c[(j * n + i) * n + k] = -value;
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }
}

/// A Lie algebra whose structure constants and metric passed validation.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct LieAlgebra(LieAlgebraSpec);

impl LieAlgebra {
    pub fn spec(&self) -> &LieAlgebraSpec {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.0.constant(i, j, k)
    }

    pub fn metric(&self) -> &[Vec<f64>] {
        &self.0.metric
    }

    pub fn is_abelian(&self) -> bool {
        self.0.c.iter().all(|&x| x == 0.0)
    }
}

pub fn validate_algebra(spec: LieAlgebraSpec) -> Result<LieAlgebra> {
    validate_algebra_with(spec, &Tolerances::default())
}

pub fn validate_algebra_with(spec: LieAlgebraSpec, tol: &Tolerances) -> Result<LieAlgebra> {
    let n = spec.dim;
    if n == 0 {
        return Err(Error::InvalidInput("algebra dimension must be positive".into()));
    }
    if spec.c.len() != n * n * n {
        return Err(Error::InvalidInput(format!(
            "expected {} structure constants, found {}",
            n * n * n,
            spec.c.len()
        )));
    }
    if spec.labels.len() != n {
        return Err(Error::InvalidInput(format!(
            "expected {n} basis labels, found {}",
            spec.labels.len()
        )));
    }
    if spec.metric.len() != n || spec.metric.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput(format!("metric must be {n}x{n}")));
    }
    if spec.c.iter().chain(spec.metric.iter().flatten()).any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("non-finite entry in algebra data".into()));
    }

    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let value = spec.constant(i, j, k);
                let mirror = spec.constant(j, i, k);
                if value != -mirror {
                    return Err(Error::AntisymmetryViolation {
                        i: i + 1,
                        j: j + 1,
                        k: k + 1,
                        value,
                        mirror,
                    });
                }
            }
        }
    }

    // [[Xi,Xj],Xk] + [[Xj,Xk],Xi] + [[Xk,Xi],Xj], component by component
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut sum = 0.0;
                    for m in 0..n {
                        sum += spec.constant(i, j, m) * spec.constant(m, k, l)
                            + spec.constant(j, k, m) * spec.constant(m, i, l)
                            + spec.constant(k, i, m) * spec.constant(m, j, l);
                    }
                    if sum.abs() > tol.jacobi {
                        return Err(Error::JacobiViolation {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                            residual: sum.abs(),
                        });
                    }
                }
            }
        }
    }

    let g = DMatrix::from_fn(n, n, |a, b| spec.metric[a][b]);
    let asymmetry = (&g - g.transpose()).amax();
    let min_eigenvalue = SymmetricEigen::new(g.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if asymmetry > 0.0 || min_eigenvalue <= 0.0 {
        return Err(Error::NonPositiveMetric {
            min_eigenvalue,
            asymmetry,
        });
    }
    Ok(LieAlgebra(spec))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KillingForm {
    pub matrix: Vec<Vec<f64>>,
    pub rank: usize,
    pub semisimple: bool,
}

/// `K[a][b] = trace(ad X_a ∘ ad X_b)`; semisimple iff K is nondegenerate.
pub fn killing_form(algebra: &LieAlgebra) -> KillingForm {
    let n = algebra.dim();
    let mut k = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in a..n {
            let mut sum = 0.0;
            for j in 0..n {
                for l in 0..n {
                    sum += algebra.c(a, j, l) * algebra.c(b, l, j);
                }
            }
            k[a][b] = sum;
            k[b][a] = sum;
        }
    }
    let m = DMatrix::from_fn(n, n, |a, b| k[a][b]);
    let sv = m.singular_values();
    let policy = Tolerances::default().rank_policy();
    let thr = policy.threshold(sv.max());
    let rank = sv.iter().filter(|&&s| s > thr).count();
    KillingForm {
        matrix: k,
        rank,
        semisimple: rank == n,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AdInvariance {
    pub invariant: bool,
    pub worst_residual: f64,
}

/// Checks `⟨[X_i,X_j],X_k⟩ + ⟨X_j,[X_i,X_k]⟩ = 0` over all basis triples.
pub fn check_ad_invariance(algebra: &LieAlgebra) -> AdInvariance {
    let n = algebra.dim();
    let g = algebra.metric();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut r = 0.0;
                for l in 0..n {
                    r += algebra.c(i, j, l) * g[l][k] + algebra.c(i, k, l) * g[j][l];
                }
                worst = worst.max(r.abs());
            }
        }
    }
    AdInvariance {
        invariant: worst <= Tolerances::default().structure,
        worst_residual: worst,
    }
}
