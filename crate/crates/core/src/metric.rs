//! Extended metric spaces and cross-ratio triples.
//!
//! An [`ExtendedMetricSpace`] is a finite labeled point set with a symmetric
//! distance matrix. At most one point, the remote point `ω`, may sit at
//! infinite distance from every other point; the distance sentinel for it is
//! `f64::INFINITY` and no other entry may be non-finite.
//!
//! The cross ratio triple of an admissible quadruple `(x, y, z, w)` is the
//! projective point `(d(x,y)d(z,w) : d(x,z)d(y,w) : d(x,w)d(y,z))`, stored
//! normalized to the standard 2-simplex.

use serde::Serialize;
use thiserror::Error;

use crate::scan::{max_over_quadruples, max_over_triples};
use crate::tolerance::EPS_REL;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("a space needs at least one point")]
    Empty,
    #[error("expected {expected} labels or columns, row {row} has {found}")]
    Shape {
        expected: usize,
        row: usize,
        found: usize,
    },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("entry ({i}, {j}) is NaN")]
    NotANumber { i: usize, j: usize },
    #[error("entry ({i}, {j}) = {value} is negative")]
    Negative { i: usize, j: usize, value: f64 },
    #[error("diagonal entry {i} = {value} is not zero")]
    NonzeroDiagonal { i: usize, value: f64 },
    #[error("entry ({i}, {j}) is infinite but neither point is the remote point")]
    InfiniteOutsideOmega { i: usize, j: usize },
    #[error("entry ({i}, {j}) involves the remote point and must be infinite")]
    FiniteOmegaDistance { i: usize, j: usize },
    #[error("entries ({i}, {j}) = {a} and ({j}, {i}) = {b} differ")]
    Asymmetric { i: usize, j: usize, a: f64, b: f64 },
    #[error("triangle inequality fails: d({i},{k}) exceeds d({i},{j}) + d({j},{k}) by {excess}")]
    Triangle {
        i: usize,
        j: usize,
        k: usize,
        excess: f64,
    },
    #[error("quadruple {0:?} is not admissible (a point occurs three or more times)")]
    Inadmissible([usize; 4]),
    #[error("quadruple {0:?} has all three distance products equal to zero")]
    Degenerate([usize; 4]),
}

/// Finite labeled point set with an extended metric.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedMetricSpace {
    labels: Vec<String>,
    dist: Vec<f64>,
    omega: Option<usize>,
}

impl ExtendedMetricSpace {
    /// Builds a space from a row-major matrix, validating with [`EPS_REL`].
    pub fn new(labels: Vec<String>, rows: Vec<Vec<f64>>, omega: Option<usize>) -> Result<Self, MetricError> {
        Self::with_tolerance(labels, rows, omega, EPS_REL)
    }

    /// Builds a space from a row-major matrix.
    ///
    /// Symmetry and the triangle inequality are checked relative to the
    /// largest finite distance. Entries within tolerance of symmetric are
    /// replaced by the upper-triangle value.
    pub fn with_tolerance(
        labels: Vec<String>,
        rows: Vec<Vec<f64>>,
        omega: Option<usize>,
        eps: f64,
    ) -> Result<Self, MetricError> {
        let n = labels.len();
        if n == 0 {
            return Err(MetricError::Empty);
        }
        if rows.len() != n {
            return Err(MetricError::Shape {
                expected: n,
                row: rows.len(),
                found: rows.len(),
            });
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MetricError::Shape {
                    expected: n,
                    row: r,
                    found: row.len(),
                });
            }
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(MetricError::DuplicateLabel(a.clone()));
            }
        }
        if let Some(w) = omega {
            if w >= n {
                return Err(MetricError::IndexOutOfRange { index: w, len: n });
            }
        }

        let mut scale: f64 = 0.0;
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v.is_nan() {
                    return Err(MetricError::NotANumber { i, j });
                }
                if v < 0.0 {
                    return Err(MetricError::Negative { i, j, value: v });
                }
                let touches_omega = i != j && (omega == Some(i) || omega == Some(j));
                if v.is_infinite() && !touches_omega {
                    if i == j {
                        return Err(MetricError::NonzeroDiagonal { i, value: v });
                    }
                    return Err(MetricError::InfiniteOutsideOmega { i, j });
                }
                if touches_omega && v.is_finite() {
                    return Err(MetricError::FiniteOmegaDistance { i, j });
                }
                if v.is_finite() {
                    scale = scale.max(v);
                }
            }
        }
        let abs_tol = eps * scale;

        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            if rows[i][i] != 0.0 {
                return Err(MetricError::NonzeroDiagonal { i, value: rows[i][i] });
            }
            for j in i + 1..n {
                let (a, b) = (rows[i][j], rows[j][i]);
                let same = a == b || (a - b).abs() <= abs_tol;
                if !same {
                    return Err(MetricError::Asymmetric { i, j, a, b });
                }
                dist[i * n + j] = a;
                dist[j * n + i] = a;
            }
        }

        let space = ExtendedMetricSpace { labels, dist, omega };
        if let Some((excess, [i, j, k])) = space.worst_triangle_excess() {
            if excess > abs_tol {
                return Err(MetricError::Triangle { i, j, k, excess });
            }
        }
        Ok(space)
    }

    /// Builds a space from a distance function on index pairs `i < j`.
    #[allow(clippy::needless_range_loop)]
    pub fn from_fn<F>(labels: Vec<String>, omega: Option<usize>, eps: f64, f: F) -> Result<Self, MetricError>
    where
        F: Fn(usize, usize) -> f64,
    {
        let n = labels.len();
        let mut rows = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = if omega == Some(i) || omega == Some(j) {
                    f64::INFINITY
                } else {
                    f(i, j)
                };
                rows[i][j] = v;
                rows[j][i] = v;
            }
        }
        Self::with_tolerance(labels, rows, omega, eps)
    }

    /// Labels `prefix0, prefix1, ...`.
    pub fn numbered_labels(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, MetricError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| MetricError::UnknownLabel(label.to_string()))
    }

    pub fn omega(&self) -> Option<usize> {
        self.omega
    }

    pub fn is_omega(&self, i: usize) -> bool {
        self.omega == Some(i)
    }

    /// Distance between two points; `f64::INFINITY` between `ω` and any other point.
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.len() + j]
    }

    /// Largest finite distance.
    pub fn scale(&self) -> f64 {
        self.dist
            .iter()
            .copied()
            .filter(|v| v.is_finite())
            .fold(0.0, f64::max)
    }

    /// Indices of all points other than `ω`.
    pub fn finite_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.is_omega(i)).collect()
    }

    /// Row-major copy of the matrix.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        (0..n).map(|i| self.dist[i * n..(i + 1) * n].to_vec()).collect()
    }

    /// The subspace on the given indices, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self, MetricError> {
        for &i in indices {
            if i >= self.len() {
                return Err(MetricError::IndexOutOfRange {
                    index: i,
                    len: self.len(),
                });
            }
        }
        let m = indices.len();
        if m == 0 {
            return Err(MetricError::Empty);
        }
        let mut dist = vec![0.0; m * m];
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                dist[a * m + b] = self.dist(i, j);
            }
        }
        let labels: Vec<String> = indices.iter().map(|&i| self.labels[i].clone()).collect();
        for (a, l) in labels.iter().enumerate() {
            if labels[..a].contains(l) {
                return Err(MetricError::DuplicateLabel(l.clone()));
            }
        }
        Ok(ExtendedMetricSpace {
            labels,
            dist,
            omega: self.omega.and_then(|w| indices.iter().position(|&i| i == w)),
        })
    }

    /// Largest `d(i,k) - d(i,j) - d(j,k)` over finite triples.
    fn worst_triangle_excess(&self) -> Option<(f64, [usize; 3])> {
        let finite = self.finite_indices();
        let m = finite.len();
        if m < 3 {
            return None;
        }
        max_over_triples(m, |[a, b, c]| {
            let (i, j, k) = (finite[a], finite[b], finite[c]);
            let (x, y, z) = (self.dist(i, j), self.dist(j, k), self.dist(i, k));
            (z - x - y).max(x - y - z).max(y - x - z)
        })
        .map(|(e, [a, b, c])| (e, [finite[a], finite[b], finite[c]]))
    }
}

/// Region of the standard 2-simplex relative to `Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimplexRegion {
    /// Entries satisfy all three triangle inequalities strictly.
    Interior,
    /// On `∂Δ`: equality in one triangle inequality.
    Boundary,
    /// Some entry exceeds the sum of the other two.
    Outside,
}

/// Projective triple normalized to `a + b + c = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossRatioTriple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl CrossRatioTriple {
    /// Normalizes a nonnegative triple; `None` if all entries vanish or one is
    /// negative or non-finite.
    pub fn normalized(a: f64, b: f64, c: f64) -> Option<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) || a < 0.0 || b < 0.0 || c < 0.0 {
            return None;
        }
        let s = a + b + c;
        if s <= 0.0 {
            return None;
        }
        Some(CrossRatioTriple {
            a: a / s,
            b: b / s,
            c: c / s,
        })
    }

    pub fn entries(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    /// `1 - 2 max(a, b, c)`: the slack of the tightest triangle inequality.
    ///
    /// Positive inside `Δ`, zero on `∂Δ`, negative outside.
    pub fn margin(&self) -> f64 {
        1.0 - 2.0 * self.a.max(self.b).max(self.c)
    }

    pub fn classify(&self, eps: f64) -> SimplexRegion {
        let m = self.margin();
        if m > eps {
            SimplexRegion::Interior
        } else if m >= -eps {
            SimplexRegion::Boundary
        } else {
            SimplexRegion::Outside
        }
    }

    pub fn in_delta(&self, eps: f64) -> bool {
        self.classify(eps) != SimplexRegion::Outside
    }

    pub fn on_boundary(&self, eps: f64) -> bool {
        self.classify(eps) == SimplexRegion::Boundary
    }

    /// Componentwise maximum absolute difference.
    pub fn deviation(&self, other: &CrossRatioTriple) -> f64 {
        (self.a - other.a)
            .abs()
            .max((self.b - other.b).abs())
            .max((self.c - other.c).abs())
    }
}

/// Classifies a normalized triple against `Δ` with tolerance `eps`.
pub fn classify_simplex(t: &CrossRatioTriple, eps: f64) -> SimplexRegion {
    t.classify(eps)
}

/// True if no index occurs three or more times.
pub fn is_admissible(q: [usize; 4]) -> bool {
    q.iter().all(|x| q.iter().filter(|y| *y == x).count() <= 2)
}

/// Cross ratio triple of an admissible quadruple.
///
/// If `ω` occurs once, each product keeps only its finite factor; if it
/// occurs twice, the product pairing the two `ω` slots is 0 and the other two
/// are equal.
pub fn crt(space: &ExtendedMetricSpace, q: [usize; 4]) -> Result<CrossRatioTriple, MetricError> {
    for &i in &q {
        if i >= space.len() {
            return Err(MetricError::IndexOutOfRange {
                index: i,
                len: space.len(),
            });
        }
    }
    if !is_admissible(q) {
        return Err(MetricError::Inadmissible(q));
    }
    // The three pairings of the four slots, in triple order.
    const PAIRINGS: [[(usize, usize); 2]; 3] = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
    let omega_slots: Vec<usize> = (0..4).filter(|&s| space.is_omega(q[s])).collect();
    let raw: [f64; 3] = match omega_slots.len() {
        0 => PAIRINGS.map(|[(a, b), (c, d)]| space.dist(q[a], q[b]) * space.dist(q[c], q[d])),
        1 => {
            let w = omega_slots[0];
            PAIRINGS.map(|[(a, b), (c, d)]| {
                if a == w || b == w {
                    space.dist(q[c], q[d])
                } else {
                    space.dist(q[a], q[b])
                }
            })
        }
        _ => {
            let (s, t) = (omega_slots[0], omega_slots[1]);
            PAIRINGS.map(|[(a, b), (c, d)]| {
                let pairs_omegas = (a, b) == (s, t) || (c, d) == (s, t);
                if pairs_omegas {
                    0.0
                } else {
                    1.0
                }
            })
        }
    };
    CrossRatioTriple::normalized(raw[0], raw[1], raw[2]).ok_or(MetricError::Degenerate(q))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PtolemyReport {
    pub holds: bool,
    /// Quadruple with the smallest triangle margin.
    pub worst_quadruple: Option<[usize; 4]>,
    /// Smallest `1 - 2 max(crt)` over all quadruples; negative means violation.
    pub worst_margin: Option<f64>,
    pub quadruples_checked: usize,
}

/// Checks that every admissible quadruple has its cross ratio triple in `Δ`.
///
/// Only quadruples of distinct points are scanned: permuting a quadruple
/// permutes the entries of its triple, and quadruples with a repeated point
/// always land on a vertex of `Δ`. Degenerate quadruples (coincident points
/// making every product vanish) are skipped.
pub fn is_ptolemy(space: &ExtendedMetricSpace, eps: f64) -> PtolemyReport {
    let (worst, count) = max_over_quadruples(space.len(), |q| crt(space, q).ok().map(|t| -t.margin()));
    PtolemyReport {
        holds: worst.is_none_or(|(neg, _)| -neg >= -eps),
        worst_quadruple: worst.map(|(_, q)| q),
        worst_margin: worst.map(|(neg, _)| -neg),
        quadruples_checked: count,
    }
}

/// True if the quadruple satisfies the Ptolemy equality, i.e. its cross ratio
/// triple lies on `∂Δ`.
pub fn is_circle_quadruple(
    space: &ExtendedMetricSpace,
    q: [usize; 4],
    eps: f64,
) -> Result<bool, MetricError> {
    Ok(crt(space, q)?.on_boundary(eps))
}

/// Number of 4-point subsets whose cross ratio triple lies on `∂Δ`, and the
/// number of subsets scanned.
pub fn circle_quadruple_census(space: &ExtendedMetricSpace, eps: f64) -> (usize, usize) {
    let (_, total) = max_over_quadruples(space.len(), |q| crt(space, q).ok().map(|_| 0.0));
    let (_, on) = max_over_quadruples(space.len(), |q| {
        crt(space, q).ok().filter(|t| t.on_boundary(eps)).map(|_| 0.0)
    });
    (on, total)
}

/// True if every triple of finite points attains equality in the triangle
/// inequality, relative to the largest distance.
pub fn all_triples_collinear(space: &ExtendedMetricSpace, eps: f64) -> bool {
    let finite = space.finite_indices();
    let tol = eps * space.scale();
    let worst = max_over_triples(finite.len(), |[a, b, c]| {
        let (i, j, k) = (finite[a], finite[b], finite[c]);
        let mut d = [space.dist(i, j), space.dist(j, k), space.dist(i, k)];
        d.sort_by(f64::total_cmp);
        (d[0] + d[1] - d[2]).abs()
    });
    worst.is_none_or(|(gap, _)| gap <= tol)
}

/// Isometric embedding into the real line, if one exists.
///
/// The first point is placed at 0 and the point farthest from it at its
/// distance; every other point takes the sign that matches its distance to
/// that anchor. All pairs are then verified. Returns `None` for spaces with a
/// remote point or when verification fails.
pub fn line_embed(space: &ExtendedMetricSpace, eps: f64) -> Option<Vec<f64>> {
    if space.omega().is_some() {
        return None;
    }
    let n = space.len();
    let anchor = (0..n).fold(0, |best, j| {
        if space.dist(0, j) > space.dist(0, best) {
            j
        } else {
            best
        }
    });
    let span = space.dist(0, anchor);
    let coords: Vec<f64> = (0..n)
        .map(|k| {
            let r = space.dist(0, k);
            let to_anchor = space.dist(anchor, k);
            let plus = ((r - span).abs() - to_anchor).abs();
            let minus = ((r + span) - to_anchor).abs();
            if plus <= minus {
                r
            } else {
                -r
            }
        })
        .collect();
    let tol = eps * space.scale();
    for i in 0..n {
        for j in i + 1..n {
            if ((coords[i] - coords[j]).abs() - space.dist(i, j)).abs() > tol {
                return None;
            }
        }
    }
    Some(coords)
}
