use super::module::{ComplexLieAlgebra, GModule};
use crate::algebra::{binomial, subset_rank, subsets};
use crate::error::{Error, Result};
use crate::linalg::{rank, CMatrix, C64, RankPolicy};

/// Sign of moving an element from the front of a sorted list to its sorted
/// position, and the resulting list; `None` if it is already present.
pub(crate) fn insert_sorted(rest: &[usize], c: usize) -> Option<(f64, Vec<usize>)> {
    if rest.contains(&c) {
        return None;
    }
    let pos = rest.iter().filter(|&&x| x < c).count();
    let mut out = rest.to_vec();
    out.insert(pos, c);
    Some((if pos % 2 == 0 { 1.0 } else { -1.0 }, out))
}

/// The differential `C^r(g; V) → C^{r+1}(g; V)`.
///
/// Cochains are stored by their values on sorted basis tuples: coordinate
/// `S·dim V + v` is component `v` of `ω(X_{S_1}, …, X_{S_r})`.
pub fn ce_differential(g: &ComplexLieAlgebra, module: &GModule, r: usize) -> Result<CMatrix> {
    let n = g.dim;
    if r > n {
        return Err(Error::DegreeOutOfRange { r, dim: n });
    }
    let d = module.dim;
    let rows = binomial(n, r + 1) * d;
    let cols = binomial(n, r) * d;
    let mut m = CMatrix::zeros(rows, cols);
    for (ti, t) in subsets(n, r + 1).iter().enumerate() {
        for j in 0..t.len() {
            let rest: Vec<usize> = t.iter().copied().filter(|&x| x != t[j]).collect();
            let si = subset_rank(&rest, n);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let mut block = m.view_mut((ti * d, si * d), (d, d));
            block += &module.action[t[j]] * C64::new(sign, 0.0);
        }
        for j in 0..t.len() {
            for k in j + 1..t.len() {
                let rest: Vec<usize> = t
                    .iter()
                    .copied()
                    .filter(|&x| x != t[j] && x != t[k])
                    .collect();
                let sign = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
                for c in 0..n {
                    let coef = g.constant(t[j], t[k], c);
                    if coef == C64::new(0.0, 0.0) {
                        continue;
                    }
                    if let Some((s, sorted)) = insert_sorted(&rest, c) {
                        let si = subset_rank(&sorted, n);
                        let val = coef * (sign * s);
                        for v in 0..d {
                            m[(ti * d + v, si * d + v)] += val;
                        }
                    }
                }
            }
        }
    }
    Ok(m)
}

/// `dim H^r(g; V)` for `r = 0..=dim g`.
pub fn ce_cohomology(g: &ComplexLieAlgebra, module: &GModule, policy: RankPolicy) -> Result<Vec<usize>> {
    let n = g.dim;
    let ranks: Vec<usize> = (0..=n)
        .map(|r| ce_differential(g, module, r).map(|m| rank(&m, policy)))
        .collect::<Result<_>>()?;
    Ok((0..=n)
        .map(|r| {
            let cochains = binomial(n, r) * module.dim;
            let incoming = if r == 0 { 0 } else { ranks[r - 1] };
            cochains - ranks[r] - incoming
        })
        .collect())
}
