//! Ptolemy segments and their quadrant curves.
//!
//! A Ptolemy segment `[0, 1]` with `d(0,1) = R` is encoded by the curve
//! `t ↦ p_t = (d(t,1), d(t,0))` in the closed first quadrant, running from
//! `(R, 0)` to `(0, R)`. The Ptolemy equality on `(0, s, t, 1)` recovers every
//! distance as `d(s,t) = ⟨Jp_s, p_t⟩ / R` for `s ≤ t`. Valid curves are the
//! convex curves with strictly increasing `arg` inside `T(e¹_R, e²_R)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::Rng;
use serde::Serialize;

use crate::curve::{
    check_arg_increasing, check_endpoint, check_left_turns, check_order, check_params,
    worst_ordered_residual, CurveError,
};
use crate::io::CurveFile;
use crate::metric::ExtendedMetricSpace;
use crate::moebius_map::{map_along_polyline, MoebiusMap, PolylineTarget, Topology};
use crate::planar::{signed_distance, Vec2};

/// Sampled Ptolemy parameterization of a segment.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadrantCurve {
    r: f64,
    samples: Vec<Vec2>,
    params: Vec<f64>,
}

fn uniform_params(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

impl QuadrantCurve {
    /// Validates `samples` with parameters spread uniformly over `[0, 1]`.
    pub fn new(r: f64, samples: Vec<Vec2>, eps: f64) -> Result<Self, CurveError> {
        let params = if samples.len() >= 2 {
            uniform_params(samples.len())
        } else {
            vec![0.0; samples.len()]
        };
        Self::with_params(r, samples, params, eps)
    }

    pub fn with_params(r: f64, samples: Vec<Vec2>, params: Vec<f64>, eps: f64) -> Result<Self, CurveError> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(CurveError::BadScale(r));
        }
        let n = samples.len();
        if n < 2 {
            return Err(CurveError::TooFewSamples { needed: 2, found: n });
        }
        check_params(&params, n)?;
        let tol = eps * r;
        check_endpoint(&samples, 0, Vec2::new(r, 0.0), tol)?;
        check_endpoint(&samples, n - 1, Vec2::new(0.0, r), tol)?;
        for (i, p) in samples.iter().enumerate() {
            if p.a < -tol || p.b < -tol || !p.a.is_finite() || !p.b.is_finite() {
                return Err(CurveError::OutsideDomain { index: i });
            }
            // T(e¹_R, e²_R): λ = a/R, μ = b/R.
            let (l, m) = (p.a / r, p.b / r);
            if (l + m - 1.0).min(l + 1.0 - m).min(m + 1.0 - l) < -eps {
                return Err(CurveError::OutsideRegion { index: i });
            }
        }
        check_arg_increasing(&samples)?;
        check_left_turns(&samples, eps)?;
        Ok(QuadrantCurve { r, samples, params })
    }

    pub fn from_file(file: &CurveFile, eps: f64) -> Result<Self, CurveError> {
        match &file.t {
            Some(t) => Self::with_params(file.r, file.points(), t.clone(), eps),
            None => Self::new(file.r, file.points(), eps),
        }
    }

    pub fn to_file(&self) -> CurveFile {
        CurveFile {
            r: self.r,
            kind: Some("segment".into()),
            samples: self.samples.iter().map(|p| [p.a, p.b]).collect(),
            t: Some(self.params.clone()),
        }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn samples(&self) -> &[Vec2] {
        &self.samples
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Reflection across the bisector `a = b`, reversing the orientation.
    pub fn reflected(&self) -> QuadrantCurve {
        let samples = self.samples.iter().rev().map(|p| Vec2::new(p.b, p.a)).collect();
        let params = self.params.iter().rev().map(|t| 1.0 - t).collect();
        QuadrantCurve {
            r: self.r,
            samples,
            params,
        }
    }
}

/// Metric on the curve samples: `d(s,t) = ⟨Jp_s, p_t⟩ / R` for `s ≤ t`.
///
/// Points are labeled `t0, t1, ...` in curve order.
pub fn segment_from_curve(curve: &QuadrantCurve, eps: f64) -> Result<ExtendedMetricSpace, CurveError> {
    let s = curve.samples();
    Ok(ExtendedMetricSpace::from_fn(
        ExtendedMetricSpace::numbered_labels("t", s.len()),
        None,
        eps,
        |i, j| signed_distance(s[i], s[j]) / curve.r(),
    )?)
}

/// Ptolemy parameterization of the points `order[0], ..., order[n-1]`.
///
/// Fails if the Ptolemy equality does not hold within `eps` on some ordered
/// quadruple; the error reports the worst one (as indices into the space).
pub fn curve_from_segment(
    space: &ExtendedMetricSpace,
    order: &[usize],
    eps: f64,
) -> Result<QuadrantCurve, CurveError> {
    check_order(space, order, 2)?;
    if let Some((residual, q)) = worst_ordered_residual(space, order) {
        if residual > eps {
            return Err(CurveError::PtolemyEquality {
                quad: q.map(|p| order[p]),
                residual,
            });
        }
    }
    let (first, last) = (order[0], order[order.len() - 1]);
    let r = space.dist(first, last);
    let samples = order
        .iter()
        .map(|&x| Vec2::new(space.dist(x, last), space.dist(x, first)))
        .collect();
    QuadrantCurve::new(r, samples, eps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcBranch {
    /// The shorter arc; inscribed angle `π - α/2`.
    Minor,
    /// The longer arc; inscribed angle `α/2`.
    Major,
}

/// Central angle `α` of a chord of length `R` in a circle of radius `r`.
fn central_angle(r_chord: f64, radius: f64) -> f64 {
    2.0 * (r_chord / (2.0 * radius)).min(1.0).asin()
}

/// Inscribed angle `β` seen from the chosen arc.
pub fn inscribed_angle(r_chord: f64, radius: f64, branch: ArcBranch) -> f64 {
    let alpha = central_angle(r_chord, radius);
    match branch {
        ArcBranch::Minor => PI - alpha / 2.0,
        ArcBranch::Major => alpha / 2.0,
    }
}

/// `(a² + b² - 2ab cos β - R²) / R²`.
pub fn ellipse_residual(r_chord: f64, beta: f64, p: Vec2) -> f64 {
    (p.a * p.a + p.b * p.b - 2.0 * p.a * p.b * beta.cos() - r_chord * r_chord) / (r_chord * r_chord)
}

/// Curve of a circular arc of radius `radius` between two points at distance
/// `r_chord` in the Euclidean plane, sampled at `n` equally spaced arc angles.
///
/// Errors if `radius < r_chord / 2`.
pub fn euclidean_segment_curve(
    r_chord: f64,
    radius: f64,
    branch: ArcBranch,
    n: usize,
    eps: f64,
) -> Result<QuadrantCurve, CurveError> {
    if !(r_chord > 0.0 && r_chord.is_finite()) {
        return Err(CurveError::BadScale(r_chord));
    }
    if !(radius >= r_chord / 2.0) {
        return Err(CurveError::BadScale(radius));
    }
    if n < 2 {
        return Err(CurveError::TooFewSamples { needed: 2, found: n });
    }
    let alpha = central_angle(r_chord, radius);
    let sweep = match branch {
        ArcBranch::Minor => alpha,
        ArcBranch::Major => 2.0 * PI - alpha,
    };
    let chord = |angle: f64| 2.0 * radius * (angle / 2.0).sin().abs();
    let samples = (0..n)
        .map(|i| {
            let s = i as f64 / (n - 1) as f64;
            if i == 0 {
                Vec2::new(r_chord, 0.0)
            } else if i == n - 1 {
                Vec2::new(0.0, r_chord)
            } else {
                // Start p at angle 0, end q at angle α; the sample sits at
                // angle s·α (minor) or -s(2π - α) (major).
                let theta = match branch {
                    ArcBranch::Minor => s * sweep,
                    ArcBranch::Major => -s * sweep,
                };
                Vec2::new(chord(alpha - theta), chord(theta))
            }
        })
        .collect();
    QuadrantCurve::new(r_chord, samples, eps)
}

/// `(α, p)` with `α = arg p ∈ [0, π/2]`, the angle to `e¹_R`.
pub fn angle_parameterize(curve: &QuadrantCurve) -> Vec<(f64, Vec2)> {
    curve.samples().iter().map(|&p| (p.b.atan2(p.a), p)).collect()
}

/// Random convex quadrant curve with `n` samples.
///
/// In the rotated frame `u = (a-b)/√2`, `v = (a+b)/√2` the strip `|u| ≤ R/√2`
/// is exactly the strip bounding `T(e¹_R, e²_R)`; the curve is the graph
/// `v = R/√2 + h(u)` of a random nonnegative concave `h` vanishing at both
/// ends (positive mix of a parabola, a half-circle and tent functions).
pub fn random_convex_curve<R: Rng + ?Sized>(
    r: f64,
    n: usize,
    rng: &mut R,
    eps: f64,
) -> Result<QuadrantCurve, CurveError> {
    let c = r * FRAC_1_SQRT_2;
    let w_parab: f64 = rng.random_range(0.0..1.5);
    let w_circ: f64 = rng.random_range(0.0..1.0);
    let tents: Vec<(f64, f64)> = (0..rng.random_range(0..4))
        .map(|_| (rng.random_range(-0.9..0.9) * c, rng.random_range(0.0..1.0) * c))
        .collect();
    let h = |u: f64| {
        let mut v = w_parab * (c * c - u * u) / c + w_circ * (c * c - u * u).max(0.0).sqrt();
        for &(peak, height) in &tents {
            let rise = if u <= peak {
                (u + c) / (peak + c)
            } else {
                (c - u) / (c - peak)
            };
            v += height * rise.max(0.0);
        }
        v
    };
    let samples = (0..n)
        .map(|i| {
            if i == 0 {
                return Vec2::new(r, 0.0);
            }
            if i == n - 1 {
                return Vec2::new(0.0, r);
            }
            let u = c * (1.0 - 2.0 * i as f64 / (n - 1) as f64);
            let v = c + h(u);
            Vec2::new((u + v) * FRAC_1_SQRT_2, (v - u) * FRAC_1_SQRT_2)
        })
        .collect();
    QuadrantCurve::new(r, samples, eps)
}

/// The straight curve `p_t = ((1-t)R, tR)`: the segment is an interval.
pub fn straight_curve(r: f64, n: usize, eps: f64) -> Result<QuadrantCurve, CurveError> {
    let samples = (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            Vec2::new((1.0 - t) * r, t * r)
        })
        .collect();
    QuadrantCurve::new(r, samples, eps)
}

/// A sampled Ptolemy segment: `order` lists the points from one end to the
/// other and `anchors` are positions in `order` of `(x₁, x₂, x₃)`, where `x₁`
/// and `x₃` are the two ends and `x₂` is interior.
#[derive(Debug, Clone, Copy)]
pub struct SegmentInput<'a> {
    pub space: &'a ExtendedMetricSpace,
    pub order: &'a [usize],
    pub anchors: [usize; 3],
}

/// The unique Möbius map between two segments fixing the anchor triples,
/// evaluated on the source samples.
///
/// Each source sample is sent to the point of the target polyline whose
/// value of `φ(t) = crt(t, x₁', x₂', x₃')` on `∂Δ` matches the source value.
pub fn segment_moebius_map(
    src: SegmentInput<'_>,
    dst: SegmentInput<'_>,
    eps: f64,
) -> Result<MoebiusMap, CurveError> {
    for input in [&src, &dst] {
        let n = input.order.len();
        let [x1, x2, x3] = input.anchors;
        let ends_ok = (x1 == 0 && x3 == n - 1) || (x1 == n - 1 && x3 == 0);
        if !ends_ok || x2 == 0 || x2 >= n - 1 {
            return Err(CurveError::Order(format!(
                "anchors {:?} must be the two ends and an interior position",
                input.anchors
            )));
        }
    }
    curve_from_segment(src.space, src.order, eps)?;
    let dst_curve = curve_from_segment(dst.space, dst.order, eps)?;
    let target = PolylineTarget::new(
        dst_curve.samples(),
        dst_curve.params(),
        dst_curve.r(),
        dst.anchors,
        Topology::Segment,
    )?;
    map_along_polyline(src.space, src.order, src.anchors, &target, eps)
}
