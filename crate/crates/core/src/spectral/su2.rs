use super::{rational_f64, EigenLevel, FieldSymbols, LevelLabels, Rational};
use crate::linalg::{kron, CMatrix, C64};

/// Spin-l matrices `ρ(e_a) = −i·J_a` on the basis `m = l, l−1, …, −l`.
///
/// With `[e_1, e_2] = e_3` (cyclic) these satisfy `[ρ(e_i), ρ(e_j)] = ε_ijk ρ(e_k)`.
pub fn spin_matrices(two_l: u32) -> [CMatrix; 3] {
    let d = two_l as usize + 1;
    let l = f64::from(two_l) / 2.0;
    let m_of = |r: usize| l - r as f64;
    let mut j_plus = CMatrix::zeros(d, d);
    for r in 1..d {
        // J+ |m⟩ = √((l−m)(l+m+1)) |m+1⟩, and |m+1⟩ sits one row above |m⟩
        let m = m_of(r);
        j_plus[(r - 1, r)] = C64::new(((l - m) * (l + m + 1.0)).sqrt(), 0.0);
    }
    let j_minus = j_plus.adjoint();
    let jx = (&j_plus + &j_minus) * C64::new(0.5, 0.0);
    let jy = (&j_plus - &j_minus) * C64::new(0.0, -0.5);
    let jz = CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            C64::new(m_of(i), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let minus_i = C64::new(0.0, -1.0);
    [jx * minus_i, jy * minus_i, jz * minus_i]
}

pub(super) fn levels(cutoff: f64) -> Vec<EigenLevel> {
    let mut out = Vec::new();
    for two_l in 0u32.. {
        let t = i64::from(two_l);
        let lambda = Rational::new(t * (t + 2), 4);
        let lambda_f64 = rational_f64(lambda);
        if lambda_f64 > cutoff {
            break;
        }
        let d = two_l as usize + 1;
        let identity = CMatrix::identity(d, d);
        let fields = spin_matrices(two_l)
            .iter()
            .map(|rho| kron(&identity, rho))
            .collect();
        out.push(EigenLevel {
            lambda,
            lambda_f64,
            dim: d * d,
            labels: LevelLabels::Spin { two_l },
            fields: FieldSymbols::Dense(fields),
        });
    }
    out
}
