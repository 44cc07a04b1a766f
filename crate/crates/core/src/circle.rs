//! Ptolemy circles and their halfplane curves.
//!
//! A Ptolemy circle with basepoints `1` and `-1` at distance `R` is encoded by
//! the curve `t ↦ p_t = (±d(t,-1), d(t,1))`, `t ∈ [0, 2]`, in the upper
//! halfplane. The sign of the first coordinate flips once the curve passes
//! `-1`. It runs from `(R, 0)` through `(0, R)` to `(-R, 0)`, and the last
//! sample is the point `1` again. Distances are `d(s,t) = ⟨Jp_s, p_t⟩ / R`
//! for `s ≤ t`.

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

/// The sector `T_x(e¹_R, -e¹_R) = { s e¹_R + t x : -1 ≤ s ≤ 1, t ≥ 0 }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectorRegion {
    r: f64,
    x: Vec2,
}

impl SectorRegion {
    pub fn new(r: f64, x: Vec2) -> Result<Self, CurveError> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(CurveError::BadScale(r));
        }
        let norm = x.norm();
        if !(norm > 0.0) || x.b.abs() <= 1e-12 * norm {
            return Err(CurveError::DegenerateSector(x));
        }
        Ok(SectorRegion {
            r,
            x: (1.0 / norm) * x,
        })
    }

    pub fn direction(&self) -> Vec2 {
        self.x
    }

    /// Coefficients `(s, t)` with `v = s e¹_R + t x`.
    pub fn decompose(&self, v: Vec2) -> (f64, f64) {
        let t = v.b / self.x.b;
        ((v.a - t * self.x.a) / self.r, t)
    }

    pub fn contains(&self, v: Vec2, eps: f64) -> (bool, f64, f64) {
        let (s, t) = self.decompose(v);
        (s.abs() <= 1.0 + eps && t >= -eps * self.r, s, t)
    }
}

pub fn sector_contains(sector: &SectorRegion, v: Vec2, eps: f64) -> (bool, f64, f64) {
    sector.contains(v, eps)
}

/// Interval of `cot arg x` for which the sector contains every sample, or the
/// first sample at which it becomes empty.
fn sector_interval(r: f64, samples: &[Vec2], eps: f64) -> Result<(f64, f64), usize> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let reach = r * (1.0 + eps);
    for (i, p) in samples.iter().enumerate() {
        if p.b <= eps * r {
            if p.a.abs() > reach {
                return Err(i);
            }
            continue;
        }
        lo = lo.max((p.a - reach) / p.b);
        hi = hi.min((p.a + reach) / p.b);
        if lo > hi {
            return Err(i);
        }
    }
    Ok((lo, hi))
}

/// Sampled Ptolemy parameterization of a circle, including the closing
/// sample `(-R, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfplaneCurve {
    r: f64,
    samples: Vec<Vec2>,
    params: Vec<f64>,
    apex: usize,
    sector: SectorRegion,
}

impl HalfplaneCurve {
    /// Validates `samples`; parameters run uniformly over `[0, 1]` up to the
    /// apex `(0, R)` and over `[1, 2]` after it.
    pub fn new(r: f64, samples: Vec<Vec2>, eps: f64) -> Result<Self, CurveError> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(CurveError::BadScale(r));
        }
        let apex = find_apex(r, &samples, eps)?;
        let n = samples.len();
        let params = (0..n)
            .map(|i| {
                if i <= apex {
                    i as f64 / apex as f64
                } else {
                    1.0 + (i - apex) as f64 / (n - 1 - apex) as f64
                }
            })
            .collect();
        Self::with_params(r, samples, params, eps)
    }

    pub fn with_params(r: f64, samples: Vec<Vec2>, params: Vec<f64>, eps: f64) -> Result<Self, CurveError> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(CurveError::BadScale(r));
        }
        let n = samples.len();
        if n < 3 {
            return Err(CurveError::TooFewSamples { needed: 3, found: n });
        }
        check_params(&params, n)?;
        let tol = eps * r;
        check_endpoint(&samples, 0, Vec2::new(r, 0.0), tol)?;
        check_endpoint(&samples, n - 1, Vec2::new(-r, 0.0), tol)?;
        for (i, p) in samples.iter().enumerate() {
            if p.b < -tol || !p.a.is_finite() || !p.b.is_finite() {
                return Err(CurveError::OutsideDomain { index: i });
            }
        }
        let apex = find_apex(r, &samples, eps)?;
        check_arg_increasing(&samples)?;
        check_left_turns(&samples, eps)?;
        let (lo, hi) = sector_interval(r, &samples, eps).map_err(|index| CurveError::NoSector { index })?;
        let c = 0.5 * (lo + hi);
        let sector = SectorRegion::new(r, Vec2::new(c, 1.0))?;
        Ok(HalfplaneCurve {
            r,
            samples,
            params,
            apex,
            sector,
        })
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
            kind: Some("circle".into()),
            samples: self.samples.iter().map(|p| [p.a, p.b]).collect(),
            t: Some(self.params.clone()),
        }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// All samples, the closing `(-R, 0)` included.
    pub fn samples(&self) -> &[Vec2] {
        &self.samples
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// Index of the sample `(0, R)`, the point `-1`.
    pub fn apex(&self) -> usize {
        self.apex
    }

    /// A sector containing every sample.
    pub fn sector(&self) -> SectorRegion {
        self.sector
    }

    /// Number of distinct circle points (samples without the closing one).
    pub fn points(&self) -> usize {
        self.samples.len() - 1
    }
}

fn find_apex(r: f64, samples: &[Vec2], eps: f64) -> Result<usize, CurveError> {
    samples
        .iter()
        .position(|p| (*p - Vec2::new(0.0, r)).norm() <= eps * r)
        .ok_or(CurveError::MissingApex)
}

/// Metric on the circle points `t0, t1, ...` (the closing sample is the
/// point `t0` and is left out).
pub fn circle_from_curve(curve: &HalfplaneCurve, eps: f64) -> Result<ExtendedMetricSpace, CurveError> {
    let s = curve.samples();
    Ok(ExtendedMetricSpace::from_fn(
        ExtendedMetricSpace::numbered_labels("t", curve.points()),
        None,
        eps,
        |i, j| signed_distance(s[i], s[j]) / curve.r(),
    )?)
}

/// Position in `order` of the default `-1`: the point farthest from the
/// first one, lowest position on ties.
pub fn default_antipode(space: &ExtendedMetricSpace, order: &[usize]) -> usize {
    (1..order.len()).fold(1, |best, k| {
        if space.dist(order[0], order[k]) > space.dist(order[0], order[best]) {
            k
        } else {
            best
        }
    })
}

/// Ptolemy parameterization of a circle sampled by `order` in cyclic order,
/// with `1 = order[0]` and `-1 = order[minus_one]`.
pub fn curve_from_circle(
    space: &ExtendedMetricSpace,
    order: &[usize],
    minus_one: Option<usize>,
    eps: f64,
) -> Result<HalfplaneCurve, CurveError> {
    check_order(space, order, 3)?;
    let n = order.len();
    let m = minus_one.unwrap_or_else(|| default_antipode(space, order));
    if m == 0 || m >= n {
        return Err(CurveError::Order(format!("position {m} cannot be the point -1")));
    }
    if let Some((residual, q)) = worst_ordered_residual(space, order) {
        if residual > eps {
            return Err(CurveError::PtolemyEquality {
                quad: q.map(|p| order[p]),
                residual,
            });
        }
    }
    let (one, minus) = (order[0], order[m]);
    let r = space.dist(one, minus);
    let mut samples: Vec<Vec2> = order
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let a = space.dist(x, minus);
            Vec2::new(if k <= m { a } else { -a }, space.dist(x, one))
        })
        .collect();
    samples.push(Vec2::new(-r, 0.0));
    let params = (0..=n)
        .map(|k| {
            if k <= m {
                k as f64 / m as f64
            } else {
                1.0 + (k - m) as f64 / (n - m) as f64
            }
        })
        .collect();
    HalfplaneCurve::with_params(r, samples, params, eps)
}

/// The round circle with `d(1,-1) = R`: `p_t = R (cos(πt/2), sin(πt/2))`,
/// sampled at `t = k / per_half`, `k = 0, ..., 2 per_half`.
pub fn chordal_circle_curve(r: f64, per_half: usize, eps: f64) -> Result<HalfplaneCurve, CurveError> {
    if per_half == 0 {
        return Err(CurveError::TooFewSamples { needed: 3, found: 1 });
    }
    let m = 2 * per_half;
    let samples = (0..=m)
        .map(|k| {
            let half = std::f64::consts::FRAC_PI_2 * k as f64 / per_half as f64;
            match k {
                _ if k == per_half => Vec2::new(0.0, r),
                _ if k == m => Vec2::new(-r, 0.0),
                0 => Vec2::new(r, 0.0),
                _ => Vec2::new(r * half.cos(), r * half.sin()),
            }
        })
        .collect();
    HalfplaneCurve::new(r, samples, eps)
}

/// Curve made of two superellipse quarters `|a|^p + b^p = R^p` with exponent
/// `p_right` for `a ≥ 0` and `p_left` for `a ≤ 0`. Both exponents must be at
/// least 1 for the curve to be convex.
pub fn superellipse_curve(
    r: f64,
    p_right: f64,
    p_left: f64,
    per_half: usize,
    eps: f64,
) -> Result<HalfplaneCurve, CurveError> {
    if per_half == 0 {
        return Err(CurveError::TooFewSamples { needed: 3, found: 1 });
    }
    let quarter = |p: f64, k: usize| {
        let th = std::f64::consts::FRAC_PI_2 * k as f64 / per_half as f64;
        let (c, s) = (th.cos(), th.sin());
        Vec2::new(r * c.powf(2.0 / p), r * s.powf(2.0 / p))
    };
    let mut samples = Vec::with_capacity(2 * per_half + 1);
    for k in 0..per_half {
        samples.push(if k == 0 {
            Vec2::new(r, 0.0)
        } else {
            quarter(p_right, k)
        });
    }
    samples.push(Vec2::new(0.0, r));
    for k in (0..per_half).rev() {
        let q = if k == 0 {
            Vec2::new(r, 0.0)
        } else {
            quarter(p_left, k)
        };
        samples.push(Vec2::new(-q.a, q.b));
    }
    HalfplaneCurve::new(r, samples, eps)
}

/// Random superellipse circle with exponents drawn from `[1, 6]`.
pub fn random_circle_curve<R: Rng + ?Sized>(
    r: f64,
    per_half: usize,
    rng: &mut R,
    eps: f64,
) -> Result<HalfplaneCurve, CurveError> {
    let (p, q) = (rng.random_range(1.0..6.0), rng.random_range(1.0..6.0));
    superellipse_curve(r, p, q, per_half, eps)
}

/// A sampled Ptolemy circle in cyclic order with anchors `(x₁, x₂, x₃)` given
/// as positions in `order`. `minus_one` optionally fixes the basepoint `-1`.
#[derive(Debug, Clone, Copy)]
pub struct CircleInput<'a> {
    pub space: &'a ExtendedMetricSpace,
    pub order: &'a [usize],
    pub anchors: [usize; 3],
    pub minus_one: Option<usize>,
}

/// The unique Möbius map between two circles sending `xᵢ` to `xᵢ'`, evaluated
/// on the source samples. The arc of the source between consecutive anchors
/// is sent to the corresponding arc of the target.
pub fn circle_moebius_map(
    src: CircleInput<'_>,
    dst: CircleInput<'_>,
    eps: f64,
) -> Result<MoebiusMap, CurveError> {
    curve_from_circle(src.space, src.order, src.minus_one, eps)?;
    let dst_curve = curve_from_circle(dst.space, dst.order, dst.minus_one, eps)?;
    let target = PolylineTarget::new(
        dst_curve.samples(),
        dst_curve.params(),
        dst_curve.r(),
        dst.anchors,
        Topology::Circle,
    )?;
    map_along_polyline(src.space, src.order, src.anchors, &target, eps)
}
