//! Exact integer complexes and a rational row-reduction rank oracle.

use lieinv::linalg::{CMatrix, C64};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

pub type IntMatrix = Vec<Vec<i64>>;

pub fn exact_rank(m: &IntMatrix) -> usize {
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        for r in rank + 1..rows {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &a[rank][col];
            for c in col..cols {
                let sub = &factor * &a[rank][c];
                a[r][c] -= sub;
            }
        }
        rank += 1;
    }
    rank
}

pub fn mul(a: &IntMatrix, b: &IntMatrix, inner: usize, cols: usize) -> IntMatrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn to_complex(m: &IntMatrix, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |i, j| C64::new(m[i][j] as f64, 0.0))
}

/// A random exact complex `C^a → C^b → C^c` with `P·Q = 0`.
pub struct ExactComplex {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub p: IntMatrix,
    pub q: IntMatrix,
}

impl ExactComplex {
    pub fn oracle_h(&self) -> usize {
        self.b - exact_rank(&self.p) - exact_rank(&self.q)
    }
}

/// Unimodular `T` and its inverse from a few elementary row operations.
fn unimodular<R: Rng>(n: usize, rng: &mut R) -> (IntMatrix, IntMatrix) {
    let mut t: IntMatrix = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut inv = t.clone();
    if n < 2 {
        return (t, inv);
    }
    for _ in 0..n {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let k = [-1i64, 1][rng.random_range(0..2)];
        // T ← E·T with E = I + k e_i e_jᵀ, T⁻¹ ← T⁻¹·E⁻¹
        for col in 0..n {
            t[i][col] += k * t[j][col];
        }
        for row in inv.iter_mut() {
            row[j] -= k * row[i];
        }
    }
    (t, inv)
}

pub fn random_complex<R: Rng>(rng: &mut R, max_dim: usize) -> ExactComplex {
    let a = rng.random_range(1..=max_dim);
    let b = rng.random_range(1..=max_dim);
    let c = rng.random_range(1..=max_dim);
    let r1 = rng.random_range(0..=b.min(a));
    let r2 = rng.random_range(0..=(b - r1).min(c));
    let entry = |rng: &mut R| rng.random_range(-2i64..=2);
    // Q = T·[Q₀; 0], P = [0 | P₀]·T⁻¹ with P₀ living on the last b − r1 coordinates
    let q0: IntMatrix = (0..b)
        .map(|i| (0..a).map(|_| if i < r1 { entry(rng) } else { 0 }).collect())
        .collect();
    let p0: IntMatrix = (0..c)
        .map(|i| {
            (0..b)
                .map(|j| if j >= r1 && i < r2 { entry(rng) } else { 0 })
                .collect()
        })
        .collect();
    let (t, inv) = unimodular(b, rng);
    let q = mul(&t, &q0, b, a);
    let p = mul(&p0, &inv, b, b);
    debug_assert!(mul(&p, &q, b, a).iter().flatten().all(|x| x.abs() == 0));
    ExactComplex { a, b, c, p, q }
}
