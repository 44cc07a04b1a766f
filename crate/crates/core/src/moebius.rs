//! Metric inversions, bounded metrics and Möbius equivalence.

use serde::Serialize;
use thiserror::Error;

use crate::io::LabelMap;
use crate::metric::{crt, ExtendedMetricSpace, MetricError};
use crate::scan::max_over_quadruples;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MoebiusError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("cannot invert at {z}: it coincides with point {other}")]
    CoincidentPoint { z: usize, other: usize },
    #[error("the result violates the triangle inequality, so the input is not Ptolemy: {0}")]
    NotPtolemy(MetricError),
    #[error("cannot use the remote point as the base of a bounded metric")]
    BaseIsRemote,
    #[error("source has {source_len} points but target has {target_len}")]
    CardinalityMismatch { source_len: usize, target_len: usize },
    #[error("need at least {needed} points, found {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error("mapping is not a bijection onto the target points")]
    NotABijection,
    #[error("the two spaces do not share the same labels")]
    LabelMismatch,
}

fn finish(result: Result<ExtendedMetricSpace, MetricError>) -> Result<ExtendedMetricSpace, MoebiusError> {
    result.map_err(|e| match e {
        MetricError::Triangle { .. } => MoebiusError::NotPtolemy(e),
        other => MoebiusError::Metric(other),
    })
}

/// Inversion at `z`: `d_z(x,y) = d(x,y) / (d(z,x) d(z,y))`, `d_z(x,ω) = 1/d(z,x)`.
///
/// The result has `z` as its remote point. Inverting at the current remote
/// point returns the space unchanged.
pub fn invert_at(
    space: &ExtendedMetricSpace,
    z: usize,
    eps: f64,
) -> Result<ExtendedMetricSpace, MoebiusError> {
    let n = space.len();
    if z >= n {
        return Err(MetricError::IndexOutOfRange { index: z, len: n }.into());
    }
    if space.is_omega(z) {
        return Ok(space.clone());
    }
    if let Some(other) = (0..n).find(|&x| x != z && space.dist(z, x) == 0.0) {
        return Err(MoebiusError::CoincidentPoint { z, other });
    }
    let old = space.omega();
    finish(ExtendedMetricSpace::from_fn(
        space.labels().to_vec(),
        Some(z),
        eps,
        |x, y| match (old == Some(x), old == Some(y)) {
            (true, _) => 1.0 / space.dist(z, y),
            (_, true) => 1.0 / space.dist(z, x),
            _ => space.dist(x, y) / (space.dist(z, x) * space.dist(z, y)),
        },
    ))
}

/// Bounded metric based at `o`:
/// `d_o(x,x') = d(x,x') / ((d(x,o)+1)(d(x',o)+1))`, `d_o(x,ω) = 1/(d(x,o)+1)`.
///
/// The remote point, if any, becomes finite. All distances are at most 1.
pub fn bound_at(
    space: &ExtendedMetricSpace,
    o: usize,
    eps: f64,
) -> Result<ExtendedMetricSpace, MoebiusError> {
    let n = space.len();
    if o >= n {
        return Err(MetricError::IndexOutOfRange { index: o, len: n }.into());
    }
    if space.is_omega(o) {
        return Err(MoebiusError::BaseIsRemote);
    }
    let old = space.omega();
    let w = |x: usize| space.dist(x, o) + 1.0;
    finish(ExtendedMetricSpace::from_fn(
        space.labels().to_vec(),
        None,
        eps,
        |x, y| match (old == Some(x), old == Some(y)) {
            (true, _) => 1.0 / w(y),
            (_, true) => 1.0 / w(x),
            _ => space.dist(x, y) / (w(x) * w(y)),
        },
    ))
}

/// A bijection between the points of two spaces.
#[derive(Debug, Clone)]
pub struct PointedCorrespondence<'a> {
    source: &'a ExtendedMetricSpace,
    target: &'a ExtendedMetricSpace,
    mapping: Vec<usize>,
}

impl<'a> PointedCorrespondence<'a> {
    /// `mapping[i]` is the target index of source point `i`.
    pub fn new(
        source: &'a ExtendedMetricSpace,
        target: &'a ExtendedMetricSpace,
        mapping: Vec<usize>,
    ) -> Result<Self, MoebiusError> {
        if source.len() != target.len() {
            return Err(MoebiusError::CardinalityMismatch {
                source_len: source.len(),
                target_len: target.len(),
            });
        }
        if mapping.len() != source.len() {
            return Err(MoebiusError::NotABijection);
        }
        let mut seen = vec![false; target.len()];
        for &j in &mapping {
            if j >= target.len() || seen[j] {
                return Err(MoebiusError::NotABijection);
            }
            seen[j] = true;
        }
        Ok(PointedCorrespondence {
            source,
            target,
            mapping,
        })
    }

    /// Matches points with equal labels.
    pub fn by_label(
        source: &'a ExtendedMetricSpace,
        target: &'a ExtendedMetricSpace,
    ) -> Result<Self, MoebiusError> {
        if source.len() != target.len() {
            return Err(MoebiusError::CardinalityMismatch {
                source_len: source.len(),
                target_len: target.len(),
            });
        }
        let mapping = source
            .labels()
            .iter()
            .map(|l| target.index_of(l))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(source, target, mapping)
    }

    /// Uses an explicit source-label to target-label map.
    pub fn from_label_map(
        source: &'a ExtendedMetricSpace,
        target: &'a ExtendedMetricSpace,
        map: &LabelMap,
    ) -> Result<Self, MoebiusError> {
        if source.len() != target.len() {
            return Err(MoebiusError::CardinalityMismatch {
                source_len: source.len(),
                target_len: target.len(),
            });
        }
        if map.len() != source.len() {
            return Err(MoebiusError::NotABijection);
        }
        let mut mapping = Vec::with_capacity(source.len());
        for l in source.labels() {
            let t = map.get(l).ok_or_else(|| MetricError::UnknownLabel(l.clone()))?;
            mapping.push(target.index_of(t)?);
        }
        Self::new(source, target, mapping)
    }

    pub fn source(&self) -> &ExtendedMetricSpace {
        self.source
    }

    pub fn target(&self) -> &ExtendedMetricSpace {
        self.target
    }

    pub fn image(&self, i: usize) -> usize {
        self.mapping[i]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    /// Largest componentwise difference between normalized triples.
    pub max_deviation: f64,
    /// Source quadruple attaining `max_deviation`.
    pub witness: Option<[usize; 4]>,
    pub quadruples_checked: usize,
}

/// Compares the cross ratio triples of every quadruple of source points with
/// those of their images.
///
/// Scanning 4-point subsets covers all admissible quadruples: reordering a
/// quadruple permutes both triples alike, and quadruples with a repeated point
/// have the same triple in every space. A quadruple that is degenerate on
/// exactly one side counts as deviation 1.
pub fn crt_equivalent(corr: &PointedCorrespondence<'_>, eps: f64) -> Result<EquivalenceReport, MoebiusError> {
    let n = corr.source.len();
    if n < 4 {
        return Err(MoebiusError::TooFewPoints { needed: 4, found: n });
    }
    let (worst, count) = max_over_quadruples(n, |q| {
        let image = q.map(|i| corr.mapping[i]);
        match (crt(corr.source, q), crt(corr.target, image)) {
            (Ok(a), Ok(b)) => Some(a.deviation(&b)),
            (Err(_), Err(_)) => None,
            _ => Some(1.0),
        }
    });
    let max_deviation = worst.map_or(0.0, |(d, _)| d);
    Ok(EquivalenceReport {
        equivalent: max_deviation <= eps,
        max_deviation,
        witness: worst.map(|(_, q)| q),
        quadruples_checked: count,
    })
}

/// The constant `λ` with `d2 = λ d1`, if the two metrics share their remote
/// point, are Möbius equivalent under the identity on labels, and agree up to
/// that factor on every finite pair.
///
/// `λ` is read off the pair with the largest `d1` distance; every pair must
/// then match with relative residual at most `eps`.
pub fn homothety_factor(
    d1: &ExtendedMetricSpace,
    d2: &ExtendedMetricSpace,
    eps: f64,
) -> Result<Option<f64>, MoebiusError> {
    if d1.labels() != d2.labels() {
        return Err(MoebiusError::LabelMismatch);
    }
    let finite = d1.finite_indices();
    if finite.len() < 2 {
        return Err(MoebiusError::TooFewPoints {
            needed: 2,
            found: finite.len(),
        });
    }
    if d1.omega() != d2.omega() {
        return Ok(None);
    }
    if d1.len() >= 4 {
        let corr = PointedCorrespondence::by_label(d1, d2)?;
        if !crt_equivalent(&corr, eps)?.equivalent {
            return Ok(None);
        }
    }
    let mut pairs = Vec::new();
    for (a, &i) in finite.iter().enumerate() {
        for &j in &finite[a + 1..] {
            pairs.push((i, j));
        }
    }
    let &(bi, bj) = pairs
        .iter()
        .max_by(|p, q| d1.dist(p.0, p.1).total_cmp(&d1.dist(q.0, q.1)))
        .expect("at least one pair");
    if d1.dist(bi, bj) == 0.0 {
        return Ok(None);
    }
    let lambda = d2.dist(bi, bj) / d1.dist(bi, bj);
    if lambda <= 0.0 {
        return Ok(None);
    }
    let consistent = pairs.iter().all(|&(i, j)| {
        let (x, y) = (lambda * d1.dist(i, j), d2.dist(i, j));
        (x - y).abs() <= eps * x.max(y)
    });
    Ok(consistent.then_some(lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::is_ptolemy;
    use crate::tolerance::EPS_REL;

    fn line_with_omega(points: &[f64]) -> ExtendedMetricSpace {
        let mut labels = ExtendedMetricSpace::numbered_labels("x", points.len());
        labels.push("w".into());
        ExtendedMetricSpace::from_fn(labels, Some(points.len()), EPS_REL, |i, j| {
            (points[i] - points[j]).abs()
        })
        .unwrap()
    }

    fn chordal_circle(angles: &[f64]) -> ExtendedMetricSpace {
        ExtendedMetricSpace::from_fn(
            ExtendedMetricSpace::numbered_labels("c", angles.len()),
            None,
            EPS_REL,
            |i, j| 2.0 * ((angles[i] - angles[j]) / 2.0).sin().abs(),
        )
        .unwrap()
    }

    #[test]
    fn invert_line_at_origin() {
        let s = line_with_omega(&[0.0, 1.0, 2.0]);
        let inv = invert_at(&s, 0, EPS_REL).unwrap();
        assert_eq!(inv.omega(), Some(0));
        assert_eq!(inv.dist(1, 2), 0.5);
        assert_eq!(inv.dist(1, 3), 1.0);
        assert_eq!(inv.dist(2, 3), 0.5);
        assert_eq!(inv.dist(1, 2) + inv.dist(2, 3), inv.dist(1, 3));
    }

    #[test]
    fn double_inversion_restores_the_input() {
        let s = line_with_omega(&[0.0, 0.3, 1.7, -2.2]);
        let back = invert_at(&invert_at(&s, 1, EPS_REL).unwrap(), 4, EPS_REL).unwrap();
        assert_eq!(back.omega(), Some(4));
        for i in 0..4 {
            for j in 0..4 {
                let (a, b) = (s.dist(i, j), back.dist(i, j));
                assert!((a - b).abs() <= 1e-15 * a.max(1.0), "{i} {j}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn inverting_a_circle_at_one_of_its_points_gives_a_line() {
        let s = chordal_circle(&[0.0, 1.0, 2.5, 4.0]);
        let inv = invert_at(&s, 0, EPS_REL).unwrap();
        let (a, b, c) = (inv.dist(1, 2), inv.dist(2, 3), inv.dist(1, 3));
        assert!((a + b - c).abs() < 1e-12 * c);
    }

    #[test]
    fn inversion_rejects_coincident_points() {
        let s = ExtendedMetricSpace::from_fn(
            ExtendedMetricSpace::numbered_labels("p", 3),
            None,
            EPS_REL,
            |i, j| if i + j == 1 { 0.0 } else { 1.0 },
        )
        .unwrap();
        assert_eq!(
            invert_at(&s, 0, EPS_REL),
            Err(MoebiusError::CoincidentPoint { z: 0, other: 1 })
        );
    }

    #[test]
    fn inversion_of_non_ptolemy_input_is_reported() {
        // l1 unit square: inverting at a corner breaks the triangle inequality.
        let pts: [[f64; 2]; 4] = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let s = ExtendedMetricSpace::from_fn(
            ExtendedMetricSpace::numbered_labels("p", 4),
            None,
            EPS_REL,
            |i, j| (pts[i][0] - pts[j][0]).abs() + (pts[i][1] - pts[j][1]).abs(),
        )
        .unwrap();
        assert!(!is_ptolemy(&s, EPS_REL).holds);
        let errs: Vec<bool> = (0..4)
            .map(|z| matches!(invert_at(&s, z, EPS_REL), Err(MoebiusError::NotPtolemy(_))))
            .collect();
        assert!(errs.iter().any(|&e| e), "{errs:?}");
    }

    #[test]
    fn bounded_metric_examples() {
        let s = ExtendedMetricSpace::from_fn(
            ExtendedMetricSpace::numbered_labels("x", 2),
            None,
            EPS_REL,
            |_, _| 3.0,
        )
        .unwrap();
        assert_eq!(bound_at(&s, 0, EPS_REL).unwrap().dist(0, 1), 0.75);

        let w = line_with_omega(&[0.0, 5.0]);
        let b = bound_at(&w, 0, EPS_REL).unwrap();
        assert_eq!(b.omega(), None);
        assert_eq!(b.dist(0, 2), 1.0);
        assert_eq!(b.dist(1, 2), 1.0 / 6.0);
        assert_eq!(bound_at(&w, 2, EPS_REL), Err(MoebiusError::BaseIsRemote));
    }

    #[test]
    fn equivalence_identity_and_inversion() {
        let s = chordal_circle(&[0.0, 0.4, 1.3, 2.0, 3.5, 5.0]);
        let id = PointedCorrespondence::by_label(&s, &s).unwrap();
        let r = crt_equivalent(&id, EPS_REL).unwrap();
        assert!(r.equivalent);
        assert_eq!(r.max_deviation, 0.0);
        assert_eq!(r.quadruples_checked, 15);

        let inv = invert_at(&s, 2, EPS_REL).unwrap();
        let corr = PointedCorrespondence::by_label(&s, &inv).unwrap();
        assert!(crt_equivalent(&corr, EPS_REL).unwrap().equivalent);
    }

    #[test]
    fn perturbed_distance_breaks_equivalence() {
        let s = chordal_circle(&[0.0, 0.9, 2.0, 3.1, 4.4]);
        let mut rows = s.rows();
        rows[1][3] *= 1.01;
        rows[3][1] *= 1.01;
        let p = ExtendedMetricSpace::new(s.labels().to_vec(), rows, None).unwrap();
        let corr = PointedCorrespondence::by_label(&s, &p).unwrap();
        let r = crt_equivalent(&corr, EPS_REL).unwrap();
        assert!(!r.equivalent);
        let w = r.witness.unwrap();
        assert!(w.contains(&1) && w.contains(&3));
    }

    #[test]
    fn equivalence_needs_matching_sizes() {
        let a = chordal_circle(&[0.0, 1.0, 2.0, 3.0]);
        let b = chordal_circle(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        assert!(matches!(
            PointedCorrespondence::by_label(&a, &b),
            Err(MoebiusError::CardinalityMismatch { .. })
        ));
    }

    #[test]
    fn homothety_examples() {
        let d1 = line_with_omega(&[0.0, 1.0, 2.5, 4.0]);
        let d2 = ExtendedMetricSpace::from_fn(d1.labels().to_vec(), d1.omega(), EPS_REL, |i, j| {
            2.0 * d1.dist(i, j)
        })
        .unwrap();
        assert_eq!(homothety_factor(&d1, &d2, EPS_REL).unwrap(), Some(2.0));
        assert_eq!(homothety_factor(&d1, &d1, EPS_REL).unwrap(), Some(1.0));

        // Möbius equivalent but with a different remote point.
        let moved = invert_at(&d1, 0, EPS_REL).unwrap();
        assert_eq!(homothety_factor(&d1, &moved, EPS_REL).unwrap(), None);

        let lonely = line_with_omega(&[0.0]);
        assert!(matches!(
            homothety_factor(&lonely, &lonely, EPS_REL),
            Err(MoebiusError::TooFewPoints { .. })
        ));
    }
}
