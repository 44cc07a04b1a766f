//! Round spheres with the chordal metric, stereographic projection,
//! circumcircles and seeded sample spaces.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use thiserror::Error;

use crate::metric::{ExtendedMetricSpace, MetricError};

pub const MAX_DIMENSION: usize = 4;
pub const MAX_COUNT: usize = 64;
const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SphereError {
    #[error("vector has norm {0}, expected 1")]
    NotUnit(f64),
    #[error("dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("points {0} and {1} coincide")]
    Coincident(usize, usize),
    #[error("the three points are collinear")]
    Collinear,
    #[error("dimension n = {0} is outside 1..={max}", max = MAX_DIMENSION)]
    Dimension(usize),
    #[error("count {count} is outside {min}..={max}", max = MAX_COUNT)]
    Count { count: usize, min: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn dist(u: &[f64], v: &[f64]) -> f64 {
    u.iter()
        .zip(v)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

fn same_dim(u: &[f64], v: &[f64]) -> Result<(), SphereError> {
    if u.len() != v.len() {
        return Err(SphereError::DimensionMismatch(u.len(), v.len()));
    }
    Ok(())
}

/// A unit vector of `ℝⁿ⁺¹`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SpherePoint(Vec<f64>);

impl SpherePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self, SphereError> {
        let norm = dot(&coords, &coords).sqrt();
        if !((norm - 1.0).abs() <= UNIT_TOL) {
            return Err(SphereError::NotUnit(norm));
        }
        Ok(SpherePoint(coords))
    }

    /// Normalizes a nonzero vector.
    pub fn normalize(mut coords: Vec<f64>) -> Result<Self, SphereError> {
        let norm = dot(&coords, &coords).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(SphereError::NotUnit(norm));
        }
        coords.iter_mut().for_each(|c| *c /= norm);
        Ok(SpherePoint(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// `|u - v|`, in `[0, 2]`.
pub fn chordal_metric(u: &SpherePoint, v: &SpherePoint) -> Result<f64, SphereError> {
    same_dim(&u.0, &v.0)?;
    Ok(dist(&u.0, &v.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Projected {
    Finite(Vec<f64>),
    Infinity,
}

/// Stereographic projection from the pole `N` onto the hyperplane `N^⊥`,
/// in ambient coordinates: `σ(u) = (u - ⟨u,N⟩N) / (1 - ⟨u,N⟩)`, `σ(N) = ∞`.
///
/// For `N = eₙ₊₁` this is `(u₁, ..., uₙ, 0) / (1 - uₙ₊₁)`.
pub fn stereographic(u: &SpherePoint, pole: &SpherePoint) -> Result<Projected, SphereError> {
    same_dim(&u.0, &pole.0)?;
    let h = dot(&u.0, &pole.0);
    if dist(&u.0, &pole.0) <= UNIT_TOL {
        return Ok(Projected::Infinity);
    }
    Ok(Projected::Finite(
        u.0.iter()
            .zip(&pole.0)
            .map(|(x, n)| (x - h * n) / (1.0 - h))
            .collect(),
    ))
}

/// Projects `points` from `pole` into a Euclidean space; a point at the pole
/// becomes the remote point.
pub fn stereographic_space(
    labels: Vec<String>,
    points: &[SpherePoint],
    pole: &SpherePoint,
    eps: f64,
) -> Result<ExtendedMetricSpace, SphereError> {
    let images = points
        .iter()
        .map(|p| stereographic(p, pole))
        .collect::<Result<Vec<_>, _>>()?;
    let omega = images.iter().position(|p| *p == Projected::Infinity);
    Ok(ExtendedMetricSpace::from_fn(labels, omega, eps, |i, j| {
        match (&images[i], &images[j]) {
            (Projected::Finite(x), Projected::Finite(y)) => dist(x, y),
            _ => f64::INFINITY,
        }
    })?)
}

/// Euclidean circle in some `ℝᵏ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Circumcircle {
    pub center: Vec<f64>,
    pub radius: f64,
    /// Orthonormal basis of the plane, `basis[0]` pointing at the first input.
    pub basis: [Vec<f64>; 2],
}

impl Circumcircle {
    pub fn point(&self, angle: f64) -> Vec<f64> {
        let (c, s) = (angle.cos(), angle.sin());
        (0..self.center.len())
            .map(|i| self.center[i] + self.radius * (c * self.basis[0][i] + s * self.basis[1][i]))
            .collect()
    }

    /// `m` equally spaced points in cyclic order, starting at the first input.
    pub fn samples(&self, m: usize) -> Vec<Vec<f64>> {
        (0..m)
            .map(|k| self.point(std::f64::consts::TAU * k as f64 / m as f64))
            .collect()
    }

    /// Euclidean metric on [`Self::samples`], labeled `c0, c1, ...`.
    pub fn sample_space(&self, m: usize, eps: f64) -> Result<ExtendedMetricSpace, SphereError> {
        let s = self.samples(m);
        Ok(ExtendedMetricSpace::from_fn(
            ExtendedMetricSpace::numbered_labels("c", m),
            None,
            eps,
            |i, j| dist(&s[i], &s[j]),
        )?)
    }
}

/// The circle through three points of `ℝᵏ`, computed in their affine plane.
///
/// Three distinct points of a sphere are never collinear, so on spheres only
/// coincident points are rejected.
pub fn circumcircle_three(x1: &[f64], x2: &[f64], x3: &[f64]) -> Result<Circumcircle, SphereError> {
    same_dim(x1, x2)?;
    same_dim(x1, x3)?;
    let k = x1.len();
    let pts = [x1, x2, x3];
    for i in 0..3 {
        for j in i + 1..3 {
            if dist(pts[i], pts[j]) == 0.0 {
                return Err(SphereError::Coincident(i, j));
            }
        }
    }
    let u: Vec<f64> = (0..k).map(|i| x2[i] - x1[i]).collect();
    let v: Vec<f64> = (0..k).map(|i| x3[i] - x1[i]).collect();
    let (uu, vv, uv) = (dot(&u, &u), dot(&v, &v), dot(&u, &v));
    let det = uu * vv - uv * uv;
    if det <= 1e-14 * uu * vv {
        return Err(SphereError::Collinear);
    }
    let alpha = 0.5 * vv * (uu - uv) / det;
    let beta = 0.5 * uu * (vv - uv) / det;
    let offset: Vec<f64> = (0..k).map(|i| alpha * u[i] + beta * v[i]).collect();
    let center: Vec<f64> = (0..k).map(|i| x1[i] + offset[i]).collect();
    let radius = dot(&offset, &offset).sqrt();
    let e1: Vec<f64> = offset.iter().map(|o| -o / radius).collect();
    // Second basis vector from the part of x2 - center orthogonal to e1.
    let w: Vec<f64> = (0..k).map(|i| x2[i] - center[i]).collect();
    let proj = dot(&w, &e1);
    let mut e2: Vec<f64> = (0..k).map(|i| w[i] - proj * e1[i]).collect();
    let norm = dot(&e2, &e2).sqrt();
    if norm <= 1e-9 * radius {
        // x2 is antipodal to x1 on the circle; use x3 instead.
        let w: Vec<f64> = (0..k).map(|i| x3[i] - center[i]).collect();
        let proj = dot(&w, &e1);
        e2 = (0..k).map(|i| -(w[i] - proj * e1[i])).collect();
    }
    let norm = dot(&e2, &e2).sqrt();
    e2.iter_mut().for_each(|x| *x /= norm);
    Ok(Circumcircle {
        center,
        radius,
        basis: [e1, e2],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    /// `Sⁿ` with the chordal metric.
    Sphere,
    /// The closed upper hemisphere of `Sⁿ`.
    Hemisphere,
    /// The closed upper halfspace of `ℝⁿ` plus the remote point.
    Halfspace,
    /// `ℝⁿ` minus the open unit ball, plus the remote point.
    BallComplement,
    /// Points of `ℝ` plus the remote point.
    Line,
    /// Gaussian points of `ℝⁿ`.
    Euclidean,
    /// The `ℓ¹` unit square plus random points of `[0,1]ⁿ` (never Ptolemy).
    L1,
}

impl SampleKind {
    pub const ALL: [SampleKind; 7] = [
        SampleKind::Sphere,
        SampleKind::Hemisphere,
        SampleKind::Halfspace,
        SampleKind::BallComplement,
        SampleKind::Line,
        SampleKind::Euclidean,
        SampleKind::L1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SampleKind::Sphere => "sphere",
            SampleKind::Hemisphere => "hemisphere",
            SampleKind::Halfspace => "halfspace",
            SampleKind::BallComplement => "ball-complement",
            SampleKind::Line => "line",
            SampleKind::Euclidean => "euclidean",
            SampleKind::L1 => "l1",
        }
    }

    fn has_omega(self) -> bool {
        matches!(
            self,
            SampleKind::Halfspace | SampleKind::BallComplement | SampleKind::Line
        )
    }
}

impl fmt::Display for SampleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SampleKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        SampleKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown sample kind {s:?}"))
    }
}

fn gaussian(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample(StandardNormal)).collect()
}

fn unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let g = gaussian(rng, dim);
        let norm = dot(&g, &g).sqrt();
        if norm > 1e-8 {
            return g.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Seeded sample of `count` points of the given kind in dimension `n`.
///
/// Points are drawn with `ChaCha8Rng::seed_from_u64(seed)`; sphere directions
/// are normalized standard Gaussian vectors. Kinds with a remote point add it
/// as an extra point labeled `inf`. For [`SampleKind::L1`] the first four
/// points are the corners of the unit square in the first two coordinates.
pub fn sample_space(
    kind: SampleKind,
    n: usize,
    count: usize,
    seed: u64,
    eps: f64,
) -> Result<ExtendedMetricSpace, SphereError> {
    if !(1..=MAX_DIMENSION).contains(&n) || (kind == SampleKind::L1 && n < 2) {
        return Err(SphereError::Dimension(n));
    }
    let min = if kind == SampleKind::L1 { 4 } else { 1 };
    if count < min || count > MAX_COUNT {
        return Err(SphereError::Count { count, min });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<f64>> = (0..count)
        .map(|k| match kind {
            SampleKind::Sphere => unit(&mut rng, n + 1),
            SampleKind::Hemisphere => {
                let mut u = unit(&mut rng, n + 1);
                u[n] = u[n].abs();
                u
            }
            SampleKind::Halfspace => {
                let mut g = gaussian(&mut rng, n);
                g[n - 1] = g[n - 1].abs();
                g
            }
            SampleKind::BallComplement => {
                let r = 1.0 / (1.0 - rng.random::<f64>()).max(1e-3).sqrt();
                unit(&mut rng, n).into_iter().map(|x| r * x).collect()
            }
            SampleKind::Line => vec![rng.sample::<f64, _>(StandardNormal)],
            SampleKind::Euclidean => gaussian(&mut rng, n),
            SampleKind::L1 if k < 4 => {
                let mut corner = vec![0.0; n];
                corner[0] = [0.0, 1.0, 1.0, 0.0][k];
                corner[1] = [0.0, 0.0, 1.0, 1.0][k];
                corner
            }
            SampleKind::L1 => (0..n).map(|_| rng.random::<f64>()).collect(),
        })
        .collect();
    let mut labels = ExtendedMetricSpace::numbered_labels("p", count);
    let omega = kind.has_omega().then(|| {
        labels.push("inf".into());
        count
    });
    let metric = |i: usize, j: usize| -> f64 {
        let (x, y) = (&points[i], &points[j]);
        match kind {
            SampleKind::L1 => x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum(),
            _ => dist(x, y),
        }
    };
    Ok(ExtendedMetricSpace::from_fn(labels, omega, eps, metric)?)
}
