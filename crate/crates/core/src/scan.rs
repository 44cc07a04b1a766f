//! Data-parallel scans over index quadruples and triples.
//!
//! Reductions break ties on the lexicographically smallest witness, so the
//! result does not depend on how rayon schedules the work.

use rayon::prelude::*;

pub(crate) type Quad = [usize; 4];

fn better(a: (f64, Quad), b: (f64, Quad)) -> (f64, Quad) {
    if a.0 > b.0 || (a.0 == b.0 && a.1 < b.1) {
        a
    } else {
        b
    }
}

fn merge(a: Option<(f64, Quad)>, b: Option<(f64, Quad)>) -> Option<(f64, Quad)> {
    match (a, b) {
        (Some(x), Some(y)) => Some(better(x, y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Maximum of `score` over all `i < j < k < l < n`, with its witness.
///
/// `score` returning `None` skips the quadruple. Also returns the number of
/// quadruples that produced a score.
pub(crate) fn max_over_quadruples<F>(n: usize, score: F) -> (Option<(f64, Quad)>, usize)
where
    F: Fn(Quad) -> Option<f64> + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = None;
            let mut count = 0usize;
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in k + 1..n {
                        let q = [i, j, k, l];
                        if let Some(s) = score(q) {
                            count += 1;
                            best = merge(best, Some((s, q)));
                        }
                    }
                }
            }
            (best, count)
        })
        .reduce(|| (None, 0), |a, b| (merge(a.0, b.0), a.1 + b.1))
}

/// Maximum of `score` over all `i < j < k < n`.
pub(crate) fn max_over_triples<F>(n: usize, score: F) -> Option<(f64, [usize; 3])>
where
    F: Fn([usize; 3]) -> f64 + Sync,
{
    let (best, _) = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = None;
            for j in i + 1..n {
                for k in j + 1..n {
                    best = merge(best, Some((score([i, j, k]), [i, j, k, 0])));
                }
            }
            (best, 0usize)
        })
        .reduce(|| (None, 0), |a, b| (merge(a.0, b.0), 0));
    best.map(|(s, q)| (s, [q[0], q[1], q[2]]))
}
