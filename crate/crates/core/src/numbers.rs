//! Irrational coefficients used by the bundled torus structures.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Number of terms kept from the Liouville series `Σ_j 10^{−j!}`.
pub const LIOUVILLE_TERMS: u32 = 6;

fn factorial(j: u32) -> u32 {
    (1..=j).product()
}

/// Exact partial sum `Σ_{j≤terms} 10^{−j!}`.
pub fn liouville_partial_sum(terms: u32) -> BigRational {
    let ten = BigInt::from(10);
    let mut sum = BigRational::zero();
    for j in 1..=terms {
        sum += BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), factorial(j) as usize));
    }
    sum
}

/// The truncated Liouville constant, rounded once from the exact partial sum.
pub fn liouville() -> f64 {
    liouville_partial_sum(LIOUVILLE_TERMS)
        .to_f64()
        .expect("finite partial sum")
}

/// Rational approximations `p_j/q_j` with `q_j = 10^{j!}` from the partial
/// sums, for every `j` whose numerator and denominator fit in `i64`.
pub fn liouville_convergents() -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for j in 1..=LIOUVILLE_TERMS {
        let s = liouville_partial_sum(j);
        match (s.numer().to_i64(), s.denom().to_i64()) {
            (Some(p), Some(q)) => out.push((p, q)),
            _ => break,
        }
    }
    out
}
