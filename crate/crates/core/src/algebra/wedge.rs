use serde::Serialize;

use crate::error::{Error, Result};

/// A factor of a wedge product of invariant one-forms.
///
/// `Zeta(i)` is dual to the complement vector `M_i`, `Tau(j)` is dual to `L_j`
/// (both zero-based). The derived order puts every ζ before every τ, which is
/// the canonical order of `ζ_I ∧ τ_J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FormIndex {
    Zeta(usize),
    Tau(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Wedge {
    Zero,
    Term {
        sign: i8,
        zetas: Vec<usize>,
        taus: Vec<usize>,
    },
}

/// Normalizes a wedge of one-forms to `± ζ_I ∧ τ_J`.
pub fn wedge_into_basis(factors: &[FormIndex]) -> Wedge {
    let mut sorted = factors.to_vec();
    let mut sign: i8 = 1;
    // insertion sort, one sign flip per adjacent transposition
    for i in 1..sorted.len() {
        let mut j = i;
        while j > 0 && sorted[j - 1] > sorted[j] {
            sorted.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Wedge::Zero;
    }
    let mut zetas = Vec::new();
    let mut taus = Vec::new();
    for f in sorted {
        match f {
            FormIndex::Zeta(i) => zetas.push(i),
            FormIndex::Tau(j) => taus.push(j),
        }
    }
    Wedge::Term { sign, zetas, taus }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All strictly increasing `k`-subsets of `0..n`, lexicographically sorted.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance the rightmost entry that still has room
        let mut i = k;
        let pivot = loop {
            if i == 0 {
                break None;
            }
            i -= 1;
            if cur[i] < n - k + i {
                break Some(i);
            }
        };
        let Some(i) = pivot else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Position of a strictly increasing subset of `0..n` in the order of [`subsets`].
pub fn subset_rank(subset: &[usize], n: usize) -> usize {
    let k = subset.len();
    let mut rank = 0;
    let mut prev: Option<usize> = None;
    for (i, &s) in subset.iter().enumerate() {
        let start = prev.map_or(0, |p| p + 1);
        for v in start..s {
            rank += binomial(n - v - 1, k - i - 1);
        }
        prev = Some(s);
    }
    rank
}

/// Basis `ζ_I ∧ τ_J` of invariant (p,q)-forms, `|I| = p ⊂ 0..m`, `|J| = q ⊂ 0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiIndexBasis {
    pub p: usize,
    pub q: usize,
    pub m: usize,
    pub n: usize,
    pub entries: Vec<(Vec<usize>, Vec<usize>)>,
}

impl MultiIndexBasis {
    pub fn new(m: usize, n: usize, p: usize, q: usize) -> Result<Self> {
        if p > m || q > n {
            return Err(Error::BidegreeOutOfRange { p, q, m, n });
        }
        let taus = subsets(n, q);
        let entries = subsets(m, p)
            .into_iter()
            .flat_map(|i| taus.iter().map(move |j| (i.clone(), j.clone())))
            .collect();
        Ok(Self {
            p,
            q,
            m,
            n,
            entries,
        })
    }

    /// Basis of a bidegree past the top degree: no basis elements at all.
    pub(crate) fn beyond(m: usize, n: usize, p: usize, q: usize) -> Self {
        Self {
            p,
            q,
            m,
            n,
            entries: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn index_of(&self, zetas: &[usize], taus: &[usize]) -> Option<usize> {
        if self.entries.is_empty() || zetas.len() != self.p || taus.len() != self.q {
            return None;
        }
        Some(subset_rank(zetas, self.m) * binomial(self.n, self.q) + subset_rank(taus, self.n))
    }

    /// The factor list of basis element `idx`, ζ's first.
    pub fn factors(&self, idx: usize) -> Vec<FormIndex> {
        let (i, j) = &self.entries[idx];
        i.iter()
            .map(|&a| FormIndex::Zeta(a))
            .chain(j.iter().map(|&b| FormIndex::Tau(b)))
            .collect()
    }
}
