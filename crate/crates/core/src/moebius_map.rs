//! Möbius maps between sampled segments and circles through the map
//! `φ(t) = crt(t, x₁, x₂, x₃)` onto `∂Δ`.
//!
//! `∂Δ` is a loop through the vertices `ê₁ = φ(x₁)`, `ê₂ = φ(x₂)`, `ê₃ = φ(x₃)`.
//! Positions on it are measured by a loop coordinate in `[0, 3]` which is
//! `k` at the `k`-th anchor and, on the arc between anchors `k` and `k+1`,
//! equals `k` plus the ratio of the two entries that vanish at those anchors.

use serde::Serialize;

use crate::curve::CurveError;
use crate::metric::{crt, ExtendedMetricSpace};
use crate::moebius::{crt_equivalent, PointedCorrespondence};
use crate::planar::{signed_distance, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Segment,
    /// The polyline carries one extra closing sample equal to the first point.
    Circle,
}

/// Loop coordinate of a triple `(a, b, c)` on the arc `band` (0, 1 or 2).
fn loop_coordinate(t: [f64; 3], band: usize) -> f64 {
    let [a, b, c] = t;
    let (num, other) = match band {
        0 => (a, b),
        1 => (b, c),
        _ => (c, a),
    };
    let den = num + other;
    band as f64 + if den > 0.0 { num / den } else { 0.0 }
}

/// Polyline edges visited when walking from `x₁` through `x₂` to `x₃`
/// (and back to `x₁` on a circle). Indices are polyline indices; on a circle
/// index `n` is the closing sample.
fn walk_edges(n: usize, anchors: [usize; 3], topo: Topology) -> Result<Vec<(usize, usize)>, CurveError> {
    let [x1, x2, x3] = anchors;
    if x1 >= n || x2 >= n || x3 >= n || x1 == x2 || x2 == x3 || x1 == x3 {
        return Err(CurveError::Anchors(anchors));
    }
    match topo {
        Topology::Segment => {
            if x1 == 0 && x3 == n - 1 {
                Ok((0..n - 1).map(|k| (k, k + 1)).collect())
            } else if x1 == n - 1 && x3 == 0 {
                Ok((1..n).rev().map(|k| (k, k - 1)).collect())
            } else {
                Err(CurveError::Anchors(anchors))
            }
        }
        Topology::Circle => {
            let cyc = |x: usize| (x + n - x1) % n;
            let edge = |k: usize| (k, k + 1);
            if cyc(x2) < cyc(x3) {
                Ok((0..n).map(|i| edge((x1 + i) % n)).collect())
            } else {
                Ok((0..n)
                    .map(|i| {
                        let (p, q) = edge((x1 + 2 * n - 1 - i) % n);
                        (q, p)
                    })
                    .collect())
            }
        }
    }
}

/// Band of every edge along a walk: the number of anchors among `x₂, x₃`
/// reached at or before its start.
fn edge_bands(edges: &[(usize, usize)], n: usize, anchors: [usize; 3]) -> Vec<usize> {
    let mut band = 0;
    edges
        .iter()
        .map(|&(p, _)| {
            let pos = p % n;
            if pos == anchors[1] {
                band = 1;
            } else if pos == anchors[2] {
                band = 2;
            }
            band
        })
        .collect()
}

/// The target of a map: a sampled curve with its anchor positions.
#[derive(Debug, Clone)]
pub struct PolylineTarget {
    polyline: Vec<Vec2>,
    params: Vec<f64>,
    r: f64,
    topo: Topology,
    anchors: [usize; 3],
    edges: Vec<(usize, usize)>,
    bands: Vec<usize>,
    /// Loop coordinate at both ends of every edge.
    coords: Vec<(f64, f64)>,
}

impl PolylineTarget {
    pub fn new(
        polyline: &[Vec2],
        params: &[f64],
        r: f64,
        anchors: [usize; 3],
        topo: Topology,
    ) -> Result<Self, CurveError> {
        let points = match topo {
            Topology::Segment => polyline.len(),
            Topology::Circle => polyline.len() - 1,
        };
        let edges = walk_edges(points, anchors, topo)?;
        let bands = edge_bands(&edges, points, anchors);
        let mut target = PolylineTarget {
            polyline: polyline.to_vec(),
            params: params.to_vec(),
            r,
            topo,
            anchors,
            edges,
            bands,
            coords: Vec::new(),
        };
        target.coords = (0..target.edges.len())
            .map(|e| {
                let (p, q) = target.edges[e];
                let band = target.bands[e];
                (
                    target.coordinate(target.polyline[p], band),
                    target.coordinate(target.polyline[q], band),
                )
            })
            .collect();
        for e in 0..target.coords.len() {
            let (s0, s1) = target.coords[e];
            let prev = if e == 0 { 0.0 } else { target.coords[e - 1].1 };
            if s1 < s0 || s0 < prev - 1e-12 {
                return Err(CurveError::NotMonotone {
                    index: target.edges[e].1 % points,
                });
            }
        }
        Ok(target)
    }

    fn dist(&self, p: Vec2, q: Vec2) -> f64 {
        signed_distance(p, q).abs() / self.r
    }

    fn coordinate(&self, v: Vec2, band: usize) -> f64 {
        let [x1, x2, x3] = self.anchors.map(|i| self.polyline[i]);
        let t = [
            self.dist(v, x1) * self.dist(x2, x3),
            self.dist(v, x2) * self.dist(x1, x3),
            self.dist(v, x3) * self.dist(x1, x2),
        ];
        loop_coordinate(t, band)
    }

    /// Point of the polyline with loop coordinate `s`, with its parameter.
    fn locate(&self, s: f64) -> Option<(Vec2, f64)> {
        let e = self.coords.iter().position(|&(s0, s1)| s0 <= s && s <= s1)?;
        let (p, q) = self.edges[e];
        let (a, b) = (self.polyline[p], self.polyline[q]);
        let band = self.bands[e];
        let (s0, s1) = self.coords[e];
        if s == s0 || s == s1 {
            let mut v = if s == s0 { p } else { q };
            if self.topo == Topology::Circle && v == self.polyline.len() - 1 {
                v = 0;
            }
            return Some((self.polyline[v], self.params[v]));
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.coordinate(a.lerp(b, mid), band) < s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let lambda = 0.5 * (lo + hi);
        let t = self.params[p] + lambda * (self.params[q] - self.params[p]);
        Some((a.lerp(b, lambda), t))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MappedSample {
    pub source: String,
    /// Position of `φ` of the source point on `∂Δ`, in `[0, 3]`.
    pub loop_coordinate: f64,
    pub target_parameter: f64,
    pub target_point: Vec2,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoebiusMap {
    pub entries: Vec<MappedSample>,
    /// Largest crt deviation between the source points and their images.
    pub max_crt_deviation: f64,
    pub witness: Option<[String; 4]>,
    pub quadruples_checked: usize,
}

/// Maps the points `order` of `source` (with anchors given as positions in
/// `order`) onto `target`.
pub(crate) fn map_along_polyline(
    source: &ExtendedMetricSpace,
    order: &[usize],
    anchors: [usize; 3],
    target: &PolylineTarget,
    eps: f64,
) -> Result<MoebiusMap, CurveError> {
    let n = order.len();
    let topo = target.topo;
    let edges = walk_edges(n, anchors, topo)?;
    let bands = edge_bands(&edges, n, anchors);
    let [x1, x2, x3] = anchors.map(|p| order[p]);
    let mut coordinate = vec![0.0; n];
    for (&(p, _), &band) in edges.iter().zip(&bands) {
        let pos = p % n;
        let value = if pos == anchors[0] {
            0.0
        } else if pos == anchors[1] {
            1.0
        } else if pos == anchors[2] {
            2.0
        } else {
            let t = crt(source, [order[pos], x1, x2, x3])?;
            loop_coordinate(t.entries(), band)
        };
        coordinate[pos] = value;
    }
    if topo == Topology::Segment {
        coordinate[edges[edges.len() - 1].1] = 2.0;
    }

    let mut entries = Vec::with_capacity(n);
    let mut images = Vec::with_capacity(n);
    for (pos, &s) in coordinate.iter().enumerate() {
        let label = source.label(order[pos]).to_string();
        let (point, parameter) = target.locate(s).ok_or_else(|| CurveError::Extrapolation {
            label: label.clone(),
            value: s,
        })?;
        images.push(point);
        entries.push(MappedSample {
            source: label,
            loop_coordinate: s,
            target_parameter: parameter,
            target_point: point,
        });
    }

    let (mut max_crt_deviation, mut witness, mut quadruples_checked) = (0.0, None, 0);
    if n >= 4 {
        let src = source.restrict(order)?;
        let img = ExtendedMetricSpace::from_fn(src.labels().to_vec(), None, eps, |i, j| {
            target.dist(images[i], images[j])
        })?;
        let corr = PointedCorrespondence::new(&src, &img, (0..n).collect()).expect("identity correspondence");
        let report = crt_equivalent(&corr, eps).expect("at least four points");
        max_crt_deviation = report.max_deviation;
        quadruples_checked = report.quadruples_checked;
        witness = report.witness.map(|q| q.map(|i| src.label(i).to_string()));
    }
    Ok(MoebiusMap {
        entries,
        max_crt_deviation,
        witness,
        quadruples_checked,
    })
}
