//! Metric Möbius geometry on finite samples.
//!
//! - [`metric`]: extended metric spaces, cross ratio triples, Ptolemy checks.
//! - [`moebius`]: inversions, bounded metrics, Möbius equivalence, homotheties.
//! - [`planar`]: signed distances and wedge regions in the plane.
//! - [`segment`]: Ptolemy segments and their quadrant curves.
//! - [`circle`]: Ptolemy circles and their halfplane curves.
//! - [`sphere`]: chordal spheres, stereographic projection, circumcircles, samplers.
//! - [`glued`]: Bourdon metrics on a hyperbolic 3-space with a halfplane glued along a geodesic.
//! - [`io`]: JSON and CSV file formats.

// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circle;
pub mod curve;
pub mod glued;
pub mod io;
pub mod metric;
pub mod moebius;
pub mod moebius_map;
pub mod optimize;
pub mod planar;
pub(crate) mod scan;
pub mod segment;
pub mod sphere;
pub mod tolerance;

pub use metric::{CrossRatioTriple, ExtendedMetricSpace, MetricError, SimplexRegion};
