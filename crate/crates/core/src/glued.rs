//! Hyperbolic 3-space with a hyperbolic halfplane glued along a geodesic.
//!
//! `γ` is a geodesic of `H³` through `o`; the halfplane `H` is glued to `H³`
//! along `γ`, and `o' ∈ H` is the point at distance `l` from `o` whose foot on
//! `γ` is `o`. Points are written in Fermi coordinates relative to `γ`:
//! distance `r ≥ 0` to `γ`, foot parameter `τ` along `γ`, and for `H³` the
//! angle `θ` around `γ`. In these coordinates
//!
//! ```text
//! sinh²(d/2) = sinh²((r₁-r₂)/2) + cosh r₁ cosh r₂ sinh²(Δτ/2) + sinh r₁ sinh r₂ sin²(Δθ/2)
//! ```
//!
//! inside `H³`, and the same with `Δθ = 0` inside `H`. A geodesic between the
//! two pieces crosses `γ` once; its length is minimized over the crossing.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::metric::{ExtendedMetricSpace, MetricError};
use crate::moebius::{crt_equivalent, homothety_factor, MoebiusError, PointedCorrespondence};
use crate::optimize::golden_section;
use crate::tolerance::{GROMOV_CONVERGENCE, SEAM_TOL, T_MAX};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GluedError {
    #[error("l = {0} must be positive and finite")]
    BadLength(f64),
    #[error("t_max = {0} must be at least 20")]
    BadTruncation(f64),
    #[error("seam tolerance {0} must be positive")]
    BadTolerance(f64),
    #[error("the Gromov product of a boundary point with itself is infinite")]
    SameBoundaryPoint,
    #[error("Gromov product did not converge: |g(t_max) - g(t_max/2)| = {difference:e}; raise t_max above {t_max}")]
    NonConvergence { difference: f64, t_max: f64 },
    #[error("seam minimum sits on the bracket edge; profile (tau, value): {profile:?}")]
    SeamBracket { profile: Vec<(f64, f64)> },
    #[error("need at least 2 equator angles, found {0}")]
    TooFewAngles(usize),
    #[error("halfplane boundary angle {0} must lie in (0, pi)")]
    BadAngle(f64),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GluedSpaceConfig {
    l: f64,
    t_max: f64,
    seam_tol: f64,
}

impl GluedSpaceConfig {
    pub fn new(l: f64, t_max: f64, seam_tol: f64) -> Result<Self, GluedError> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(GluedError::BadLength(l));
        }
        if !(t_max >= 20.0 && t_max.is_finite()) {
            return Err(GluedError::BadTruncation(t_max));
        }
        if !(seam_tol > 0.0) {
            return Err(GluedError::BadTolerance(seam_tol));
        }
        Ok(GluedSpaceConfig { l, t_max, seam_tol })
    }

    /// `t_max = 40`, `seam_tol = 1e-12`.
    pub fn with_length(l: f64) -> Result<Self, GluedError> {
        Self::new(l, T_MAX, SEAM_TOL)
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn seam_tol(&self) -> f64 {
        self.seam_tol
    }

    pub fn o(&self) -> GluedPoint {
        GluedPoint::Space {
            r: 0.0,
            tau: 0.0,
            theta: 0.0,
        }
    }

    pub fn o_prime(&self) -> GluedPoint {
        GluedPoint::Half { r: self.l, tau: 0.0 }
    }

    pub fn base(&self, base: Base) -> GluedPoint {
        match base {
            Base::O => self.o(),
            Base::OPrime => self.o_prime(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Base {
    O,
    OPrime,
}

/// A point of the glued space in Fermi coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum GluedPoint {
    Space { r: f64, tau: f64, theta: f64 },
    Half { r: f64, tau: f64 },
}

impl GluedPoint {
    fn fermi(self) -> (f64, f64) {
        match self {
            GluedPoint::Space { r, tau, .. } | GluedPoint::Half { r, tau } => (r, tau),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BoundaryPoint {
    /// `γ(+∞)`.
    North,
    /// `γ(-∞)`.
    South,
    /// End of the ray from `o` in `H³` orthogonal to `γ` at angle `θ`.
    Equator(f64),
    /// End of the ray from `o` in `H` making angle `ψ ∈ (0, π)` with `γ`;
    /// `ψ = π/2` is the ray through `o'`.
    HalfPlane(f64),
}

impl BoundaryPoint {
    /// Point at distance `t` from `o` on the ray towards this boundary point.
    pub fn ray_point(self, t: f64) -> Result<GluedPoint, GluedError> {
        Ok(match self {
            BoundaryPoint::North => GluedPoint::Space {
                r: 0.0,
                tau: t,
                theta: 0.0,
            },
            BoundaryPoint::South => GluedPoint::Space {
                r: 0.0,
                tau: -t,
                theta: 0.0,
            },
            BoundaryPoint::Equator(theta) => GluedPoint::Space {
                r: t,
                tau: 0.0,
                theta,
            },
            BoundaryPoint::HalfPlane(psi) => {
                if !(psi > 0.0 && psi < std::f64::consts::PI) {
                    return Err(GluedError::BadAngle(psi));
                }
                // Right triangle with hypotenuse t and angle psi at o.
                GluedPoint::Half {
                    r: (t.sinh() * psi.sin()).asinh(),
                    tau: (t.tanh() * psi.cos()).atanh(),
                }
            }
        })
    }
}

/// `sinh²(d/2)` in Fermi coordinates.
fn half_sinh_sq(r1: f64, r2: f64, dtau: f64, dtheta: f64) -> f64 {
    let a = ((r1 - r2) / 2.0).sinh();
    let b = (dtau / 2.0).sinh();
    let c = (dtheta / 2.0).sin();
    a * a + r1.cosh() * r2.cosh() * b * b + r1.sinh() * r2.sinh() * c * c
}

fn fermi_distance(r1: f64, r2: f64, dtau: f64, dtheta: f64) -> f64 {
    2.0 * half_sinh_sq(r1, r2, dtau, dtheta).sqrt().asinh()
}

/// `D(r, u) - r` where `D(r, u) = arccosh(cosh r cosh u)` is the distance
/// from a point at distance `r` from `γ` to the point of `γ` at offset `u`
/// from its foot.
fn excess_over_foot(r: f64, u: f64) -> f64 {
    let c = r.cosh();
    let s = (u / 2.0).sinh();
    let gap = 2.0 * c * s * s;
    let big = c + gap;
    let root_big = ((big - 1.0) * (big + 1.0)).sqrt();
    if root_big == 0.0 {
        return 0.0;
    }
    let root_gap = gap * (big + c) / (root_big + r.sinh());
    ((gap + root_gap) * (-r).exp()).ln_1p()
}

/// Minimizes the length of a path from `(r1, τ1)` to `(r2, τ2)` crossing `γ`
/// at `γ(τ)`. Returns the crossing and the length.
pub fn seam_minimize(
    r1: f64,
    tau1: f64,
    r2: f64,
    tau2: f64,
    bracket: (f64, f64),
    tol: f64,
) -> Result<(f64, f64), GluedError> {
    let g = |tau: f64| excess_over_foot(r1, tau - tau1) + excess_over_foot(r2, tau - tau2);
    let (lo, hi) = bracket;
    let (tau, value) = golden_section(g, lo, hi, tol);
    if tau - lo <= tol || hi - tau <= tol {
        let profile = (0..=16)
            .map(|k| {
                let t = lo + (hi - lo) * k as f64 / 16.0;
                (t, g(t) + r1 + r2)
            })
            .collect();
        return Err(GluedError::SeamBracket { profile });
    }
    Ok((tau, value + r1 + r2))
}

/// Distance in the glued space.
pub fn glued_distance(cfg: &GluedSpaceConfig, x: GluedPoint, y: GluedPoint) -> Result<f64, GluedError> {
    use GluedPoint::*;
    Ok(match (x, y) {
        (
            Space {
                r: r1,
                tau: t1,
                theta: a1,
            },
            Space {
                r: r2,
                tau: t2,
                theta: a2,
            },
        ) => fermi_distance(r1, r2, t2 - t1, a2 - a1),
        (Half { r: r1, tau: t1 }, Half { r: r2, tau: t2 }) => fermi_distance(r1, r2, t2 - t1, 0.0),
        _ => {
            let ((r1, t1), (r2, t2)) = (x.fermi(), y.fermi());
            if r1 == 0.0 || r2 == 0.0 {
                // A point of γ lies in both pieces.
                fermi_distance(r1, r2, t2 - t1, 0.0)
            } else {
                let bracket = (t1.min(t2) - 1.0, t1.max(t2) + 1.0);
                seam_minimize(r1, t1, r2, t2, bracket, cfg.seam_tol)?.1
            }
        }
    })
}

fn gromov_at(
    cfg: &GluedSpaceConfig,
    base: GluedPoint,
    x: GluedPoint,
    y: GluedPoint,
) -> Result<f64, GluedError> {
    Ok(0.5 * (glued_distance(cfg, base, x)? + glued_distance(cfg, base, y)? - glued_distance(cfg, x, y)?))
}

/// `(ξ·ξ')_base`, the limit of `½[d(b,x_t) + d(b,y_t) - d(x_t,y_t)]` along the
/// rays from `o` towards `ξ` and `ξ'`.
///
/// Evaluated at `t_max/2` and `t_max` and extrapolated linearly in `e^{-2t}`.
pub fn gromov_product(
    cfg: &GluedSpaceConfig,
    base: Base,
    xi: BoundaryPoint,
    eta: BoundaryPoint,
) -> Result<f64, GluedError> {
    if xi == eta {
        return Err(GluedError::SameBoundaryPoint);
    }
    let b = cfg.base(base);
    let eval = |t: f64| -> Result<f64, GluedError> { gromov_at(cfg, b, xi.ray_point(t)?, eta.ray_point(t)?) };
    let (t1, t2) = (cfg.t_max / 2.0, cfg.t_max);
    let (g1, g2) = (eval(t1)?, eval(t2)?);
    let difference = (g2 - g1).abs();
    if difference > GROMOV_CONVERGENCE {
        return Err(GluedError::NonConvergence {
            difference,
            t_max: cfg.t_max,
        });
    }
    let (e1, e2) = ((-2.0 * t1).exp(), (-2.0 * t2).exp());
    Ok((g2 * e1 - g1 * e2) / (e1 - e2))
}

/// `ρ_base(ξ, ξ') = exp(-(ξ·ξ')_base)`.
pub fn bourdon_metric(
    cfg: &GluedSpaceConfig,
    base: Base,
    xi: BoundaryPoint,
    eta: BoundaryPoint,
) -> Result<f64, GluedError> {
    Ok((-gromov_product(cfg, base, xi, eta)?).exp())
}

/// Bourdon metric on a finite set of boundary points.
pub fn bourdon_space(
    cfg: &GluedSpaceConfig,
    base: Base,
    labels: Vec<String>,
    points: &[BoundaryPoint],
    eps: f64,
) -> Result<ExtendedMetricSpace, GluedError> {
    let n = points.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| bourdon_metric(cfg, base, points[i], points[j]))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows = vec![vec![0.0; n]; n];
    for (&(i, j), v) in pairs.iter().zip(values) {
        rows[i][j] = v;
        rows[j][i] = v;
    }
    Ok(ExtendedMetricSpace::with_tolerance(labels, rows, None, eps)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomothetyRatios {
    /// `ρ_{o'} / ρ_o` on the first two equator points.
    pub equator_ratio: f64,
    /// Largest deviation of `ρ_{o'} / ρ_o` over all equator pairs from
    /// `equator_ratio`.
    pub equator_spread: f64,
    #[serde(rename = "NS_ratio")]
    pub ns_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExoticReport {
    pub l: f64,
    pub t_max: f64,
    pub labels: Vec<String>,
    pub rho_o: Vec<Vec<f64>>,
    pub rho_oprime: Vec<Vec<f64>>,
    /// Largest crt deviation between `ρ_o` and `ρ_{o'}`.
    pub max_crt_dev: f64,
    pub crt_witness: Option<[String; 4]>,
    pub homothety: HomothetyRatios,
    /// `|NS_ratio - equator_ratio|`.
    pub gap: f64,
    /// Whether `ρ_{o'}` is a constant multiple of `ρ_o` on these points.
    pub homothetic: bool,
}

/// Compares `ρ_o` and `ρ_{o'}` on `{N, S}` and equator points at `angles`.
pub fn exotic_report(cfg: &GluedSpaceConfig, angles: &[f64], eps: f64) -> Result<ExoticReport, GluedError> {
    if angles.len() < 2 {
        return Err(GluedError::TooFewAngles(angles.len()));
    }
    let mut labels = vec!["N".to_string(), "S".to_string()];
    labels.extend((0..angles.len()).map(|k| format!("a{k}")));
    let mut points = vec![BoundaryPoint::North, BoundaryPoint::South];
    points.extend(angles.iter().map(|&t| BoundaryPoint::Equator(t)));
    let rho_o = bourdon_space(cfg, Base::O, labels.clone(), &points, eps)?;
    let rho_p = bourdon_space(cfg, Base::OPrime, labels.clone(), &points, eps)?;

    let corr = PointedCorrespondence::by_label(&rho_o, &rho_p)?;
    let equiv = crt_equivalent(&corr, eps)?;
    let ratio = |i: usize, j: usize| rho_p.dist(i, j) / rho_o.dist(i, j);
    let equator_ratio = ratio(2, 3);
    let mut equator_spread: f64 = 0.0;
    for i in 2..points.len() {
        for j in i + 1..points.len() {
            equator_spread = equator_spread.max((ratio(i, j) - equator_ratio).abs());
        }
    }
    let ns_ratio = ratio(0, 1);
    let homothetic = homothety_factor(&rho_o, &rho_p, 1e-6)?.is_some();
    Ok(ExoticReport {
        l: cfg.l,
        t_max: cfg.t_max,
        labels: labels.clone(),
        rho_o: rho_o.rows(),
        rho_oprime: rho_p.rows(),
        max_crt_dev: equiv.max_deviation,
        crt_witness: equiv.witness.map(|q| q.map(|i| labels[i].clone())),
        homothety: HomothetyRatios {
            equator_ratio,
            equator_spread,
            ns_ratio,
        },
        gap: (ns_ratio - equator_ratio).abs(),
        homothetic,
    })
}

/// `k` equally spaced equator angles starting at 0.
pub fn equator_angles(k: usize) -> Vec<f64> {
    (0..k)
        .map(|i| std::f64::consts::TAU * i as f64 / k as f64)
        .collect()
}
