use std::collections::BTreeMap;

use super::frame::InvolutiveFrame;
use super::wedge::{wedge_into_basis, FormIndex, MultiIndexBasis, Wedge};
use crate::error::Result;
use crate::linalg::{C64, ZERO};

const DROP_BELOW: f64 = 1e-14;

/// Constant part of d′ on invariant (p,q)-forms.
///
/// `entries[(s, t)]` is the coefficient of target basis form `t` (bidegree
/// (p,q+1)) in d′ of source basis form `s` (bidegree (p,q)).
#[derive(Clone, Debug)]
pub struct DPrimeConstants {
    pub p: usize,
    pub q: usize,
    pub source: MultiIndexBasis,
    pub target: MultiIndexBasis,
    pub entries: BTreeMap<(usize, usize), C64>,
}

impl DPrimeConstants {
    pub fn get(&self, source: usize, target: usize) -> C64 {
        self.entries.get(&(source, target)).copied().unwrap_or(ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

fn form_of(frame: &InvolutiveFrame, a: usize) -> FormIndex {
    if a < frame.n {
        FormIndex::Tau(a)
    } else {
        FormIndex::Zeta(a - frame.n)
    }
}

/// `dχ^a = −Σ_{b<c} c̃[b][c][a] χ^b ∧ χ^c` as a list of `(b, c, coefficient)`.
fn one_form_differential(frame: &InvolutiveFrame, a: usize) -> Vec<(usize, usize, C64)> {
    let d = frame.dim();
    let mut out = Vec::new();
    for b in 0..d {
        for c in b + 1..d {
            let coef = -frame.bracket(b, c, a);
            if coef.norm() > DROP_BELOW {
                out.push((b, c, coef));
            }
        }
    }
    out
}

pub fn dprime_structure_constants(
    frame: &InvolutiveFrame,
    p: usize,
    q: usize,
) -> Result<DPrimeConstants> {
    let (m, n) = (frame.m, frame.n);
    let source = MultiIndexBasis::new(m, n, p, q)?;
    let target = if q < n {
        MultiIndexBasis::new(m, n, p, q + 1)?
    } else {
        MultiIndexBasis::beyond(m, n, p, q + 1)
    };
    let mut entries = BTreeMap::new();
    if target.is_empty() {
        return Ok(DPrimeConstants {
            p,
            q,
            source,
            target,
            entries,
        });
    }

    let to_frame = |f: FormIndex| match f {
        FormIndex::Tau(j) => j,
        FormIndex::Zeta(s) => n + s,
    };
    let differentials: Vec<_> = (0..frame.dim())
        .map(|a| one_form_differential(frame, a))
        .collect();

    for s in 0..source.len() {
        let factors = source.factors(s);
        let mut acc: BTreeMap<usize, C64> = BTreeMap::new();
        for (k, &f) in factors.iter().enumerate() {
            let leibniz = if k % 2 == 0 { 1.0 } else { -1.0 };
            for &(b, c, coef) in &differentials[to_frame(f)] {
                let mut term = Vec::with_capacity(factors.len() + 1);
                term.extend_from_slice(&factors[..k]);
                term.push(form_of(frame, b));
                term.push(form_of(frame, c));
                term.extend_from_slice(&factors[k + 1..]);
                if let Wedge::Term { sign, zetas, taus } = wedge_into_basis(&term) {
                    // forms with more ζ's lie in the filtration step that is quotiented out
                    if zetas.len() != p {
                        continue;
                    }
                    let t = target
                        .index_of(&zetas, &taus)
                        .expect("bidegree (p, q+1) term");
                    *acc.entry(t).or_insert(ZERO) += coef * (leibniz * f64::from(sign));
                }
            }
        }
        for (t, v) in acc {
            if v.norm() > DROP_BELOW {
                entries.insert((s, t), v);
            }
        }
    }
    Ok(DPrimeConstants {
        p,
        q,
        source,
        target,
        entries,
    })
}
