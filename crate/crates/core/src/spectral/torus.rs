use super::{EigenLevel, FieldSymbols, LevelLabels, Rational};

/// Lattice points `k ∈ ℤⁿ` with `|k|² ≤ cutoff`, grouped by `|k|²`, each
/// group in lexicographic order.
pub(super) fn levels(n: usize, cutoff: f64) -> Vec<EigenLevel> {
    let max_norm = cutoff.floor() as i64;
    let radius = (max_norm as f64).sqrt().floor() as i64 + 1;
    let mut points: Vec<(i64, Vec<i64>)> = Vec::new();
    let mut k = vec![0i64; n];
    collect(&mut points, &mut k, 0, 0, max_norm, radius);
    // stable sort keeps the lexicographic order of generation inside each norm
    points.sort_by_key(|(norm, _)| *norm);

    let mut levels = Vec::new();
    let mut start = 0;
    while start < points.len() {
        let norm = points[start].0;
        let mut end = start;
        let mut flat = Vec::new();
        while end < points.len() && points[end].0 == norm {
            flat.extend_from_slice(&points[end].1);
            end += 1;
        }
        levels.push(EigenLevel {
            lambda: Rational::from_integer(norm),
            lambda_f64: norm as f64,
            dim: end - start,
            labels: LevelLabels::Lattice { n, k: flat },
            fields: FieldSymbols::Lattice,
        });
        start = end;
    }
    levels
}

fn collect(
    out: &mut Vec<(i64, Vec<i64>)>,
    k: &mut Vec<i64>,
    pos: usize,
    partial: i64,
    max_norm: i64,
    radius: i64,
) {
    if pos == k.len() {
        out.push((partial, k.clone()));
        return;
    }
    for v in -radius..=radius {
        let next = partial + v * v;
        if next > max_norm {
            continue;
        }
        k[pos] = v;
        collect(out, k, pos + 1, next, max_norm, radius);
    }
}
