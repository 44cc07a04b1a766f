//! Planar points, the signed distance `⟨Jp, q⟩` and wedge regions.

use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Vec2 {
    pub a: f64,
    pub b: f64,
}

impl Vec2 {
    pub const fn new(a: f64, b: f64) -> Self {
        Vec2 { a, b }
    }

    /// `arg` in `(-π, π]`.
    pub fn arg(self) -> f64 {
        self.b.atan2(self.a)
    }

    pub fn norm(self) -> f64 {
        self.a.hypot(self.b)
    }

    /// The rotation `J(a, b) = (-b, a)`.
    pub fn rot(self) -> Vec2 {
        Vec2::new(-self.b, self.a)
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.a * o.a + self.b * o.b
    }

    pub fn lerp(self, o: Vec2, s: f64) -> Vec2 {
        Vec2::new(self.a + s * (o.a - self.a), self.b + s * (o.b - self.b))
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.a, -self.b)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        Vec2::new(self * v.a, self * v.b)
    }
}

/// `⟨Jp, q⟩ = a_p b_q - b_p a_q`.
///
/// Nonnegative iff `arg p ≤ arg q` for points of the upper halfplane.
#[inline]
pub fn signed_distance(p: Vec2, q: Vec2) -> f64 {
    p.a * q.b - p.b * q.a
}

/// `⟨Jp₁,p₂⟩⟨Jp₃,p₄⟩ + ⟨Jp₂,p₃⟩⟨Jp₁,p₄⟩ - ⟨Jp₁,p₃⟩⟨Jp₂,p₄⟩`, which vanishes
/// identically.
pub fn ptolemy_identity_residual(p1: Vec2, p2: Vec2, p3: Vec2, p4: Vec2) -> f64 {
    signed_distance(p1, p2) * signed_distance(p3, p4) + signed_distance(p2, p3) * signed_distance(p1, p4)
        - signed_distance(p1, p3) * signed_distance(p2, p4)
}

/// Sum of the absolute values of the three terms of the residual.
pub fn ptolemy_identity_magnitude(p1: Vec2, p2: Vec2, p3: Vec2, p4: Vec2) -> f64 {
    (signed_distance(p1, p2) * signed_distance(p3, p4)).abs()
        + (signed_distance(p2, p3) * signed_distance(p1, p4)).abs()
        + (signed_distance(p1, p3) * signed_distance(p2, p4)).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum WedgeError {
    #[error("wedge generators {u:?} and {w:?} are linearly dependent or out of order")]
    Collinear { u: Vec2, w: Vec2 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Inside,
    Boundary,
    Outside,
}

/// The region `T(u, w)` of points `λu + μw` with `λ, μ ≥ 0` and `λ, μ, 1`
/// satisfying the triangle inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WedgeRegion {
    u: Vec2,
    w: Vec2,
}

impl WedgeRegion {
    /// Requires `arg u < arg w`, i.e. `⟨Ju, w⟩ > 0`.
    pub fn new(u: Vec2, w: Vec2) -> Result<Self, WedgeError> {
        let det = signed_distance(u, w);
        if !(det > 1e-14 * u.norm() * w.norm()) {
            return Err(WedgeError::Collinear { u, w });
        }
        Ok(WedgeRegion { u, w })
    }

    pub fn u(&self) -> Vec2 {
        self.u
    }

    pub fn w(&self) -> Vec2 {
        self.w
    }

    /// Coefficients `(λ, μ)` with `v = λu + μw`.
    pub fn decompose(&self, v: Vec2) -> (f64, f64) {
        let det = signed_distance(self.u, self.w);
        (signed_distance(v, self.w) / det, signed_distance(self.u, v) / det)
    }

    /// Membership with tolerance `eps` on the five linear constraints.
    pub fn contains(&self, v: Vec2, eps: f64) -> (Membership, f64, f64) {
        let (l, m) = self.decompose(v);
        let slack = l.min(m).min(l + m - 1.0).min(l + 1.0 - m).min(m + 1.0 - l);
        let verdict = if slack > eps {
            Membership::Inside
        } else if slack >= -eps {
            Membership::Boundary
        } else {
            Membership::Outside
        };
        (verdict, l, m)
    }
}

/// Membership of `v` in `T(u, w)` with the decomposition `(λ, μ)`.
pub fn wedge_contains(t: &WedgeRegion, v: Vec2, eps: f64) -> (Membership, f64, f64) {
    t.contains(v, eps)
}
