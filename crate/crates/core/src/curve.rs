//! Validation shared by quadrant curves (segments) and halfplane curves
//! (circles).

use thiserror::Error;

use crate::metric::MetricError;
use crate::planar::{signed_distance, Vec2};
use crate::tolerance::EPS_ARG;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("end-to-end distance R = {0} must be positive and finite")]
    BadScale(f64),
    #[error("need at least {needed} samples, found {found}")]
    TooFewSamples { needed: usize, found: usize },
    #[error("sample {index} is {found:?}, expected {expected:?}")]
    Endpoint {
        index: usize,
        found: Vec2,
        expected: Vec2,
    },
    #[error("sample {index} lies outside the allowed quadrant or halfplane")]
    OutsideDomain { index: usize },
    #[error("arg does not increase strictly at sample {index}")]
    ArgNotIncreasing { index: usize },
    #[error("curve turns the wrong way at sample {index}")]
    NotConvex { index: usize },
    #[error("sample {index} violates the triangle region")]
    OutsideRegion { index: usize },
    #[error("no sample equals (0, R)")]
    MissingApex,
    #[error("no sector direction contains all samples (first blocking sample {index})")]
    NoSector { index: usize },
    #[error("parameters must increase strictly; failure at sample {index}")]
    ParamsNotIncreasing { index: usize },
    #[error("{params} parameters for {samples} samples")]
    ParamCount { params: usize, samples: usize },
    #[error("sample order is invalid: {0}")]
    Order(String),
    #[error("Ptolemy equality fails on ordered quadruple {quad:?} (relative residual {residual:e})")]
    PtolemyEquality { quad: [usize; 4], residual: f64 },
    #[error("sector direction {0:?} is parallel to the horizontal axis")]
    DegenerateSector(Vec2),
    #[error("anchor positions {0:?} are invalid for this curve")]
    Anchors([usize; 3]),
    #[error("crt coordinate along the target is not monotone at sample {index}")]
    NotMonotone { index: usize },
    #[error("crt coordinate {value} of source point {label:?} lies outside the sampled target range")]
    Extrapolation { label: String, value: f64 },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Arg in `[0, π]` for points of the closed upper halfplane.
pub(crate) fn upper_arg(p: Vec2) -> f64 {
    p.b.max(0.0).atan2(p.a)
}

pub(crate) fn check_endpoint(
    samples: &[Vec2],
    index: usize,
    expected: Vec2,
    tol: f64,
) -> Result<(), CurveError> {
    let found = samples[index];
    if (found - expected).norm() > tol {
        return Err(CurveError::Endpoint {
            index,
            found,
            expected,
        });
    }
    Ok(())
}

/// First index at which `arg` fails to increase by at least [`EPS_ARG`].
pub(crate) fn check_arg_increasing(samples: &[Vec2]) -> Result<(), CurveError> {
    for i in 1..samples.len() {
        if !(upper_arg(samples[i]) - upper_arg(samples[i - 1]) > EPS_ARG) {
            return Err(CurveError::ArgNotIncreasing { index: i });
        }
    }
    Ok(())
}

/// Consecutive edges must turn left (or go straight), so the region between
/// the origin side and the polyline is convex.
pub(crate) fn check_left_turns(samples: &[Vec2], eps: f64) -> Result<(), CurveError> {
    for i in 1..samples.len() - 1 {
        let e0 = samples[i] - samples[i - 1];
        let e1 = samples[i + 1] - samples[i];
        if signed_distance(e0, e1) < -eps * e0.norm() * e1.norm() {
            return Err(CurveError::NotConvex { index: i });
        }
    }
    Ok(())
}

pub(crate) fn check_params(params: &[f64], samples: usize) -> Result<(), CurveError> {
    if params.len() != samples {
        return Err(CurveError::ParamCount {
            params: params.len(),
            samples,
        });
    }
    for i in 1..params.len() {
        if !(params[i] > params[i - 1]) {
            return Err(CurveError::ParamsNotIncreasing { index: i });
        }
    }
    Ok(())
}

/// Worst relative Ptolemy-equality residual over ordered position quadruples
/// `i < j < k < l` of `order`: `d(i,k)d(j,l) = d(i,j)d(k,l) + d(i,l)d(j,k)`.
pub(crate) fn worst_ordered_residual(
    space: &crate::metric::ExtendedMetricSpace,
    order: &[usize],
) -> Option<(f64, [usize; 4])> {
    let (worst, _) = crate::scan::max_over_quadruples(order.len(), |[i, j, k, l]| {
        let d = |x: usize, y: usize| space.dist(order[x], order[y]);
        let lhs = d(i, k) * d(j, l);
        let rhs = d(i, j) * d(k, l) + d(i, l) * d(j, k);
        let scale = lhs.max(rhs);
        Some(if scale > 0.0 {
            (lhs - rhs).abs() / scale
        } else {
            0.0
        })
    });
    worst
}

/// Checks that `order` lists distinct finite points of the space.
pub(crate) fn check_order(
    space: &crate::metric::ExtendedMetricSpace,
    order: &[usize],
    min_len: usize,
) -> Result<(), CurveError> {
    if order.len() < min_len {
        return Err(CurveError::TooFewSamples {
            needed: min_len,
            found: order.len(),
        });
    }
    let mut seen = vec![false; space.len()];
    for &i in order {
        if i >= space.len() {
            return Err(CurveError::Order(format!("index {i} out of range")));
        }
        if space.is_omega(i) {
            return Err(CurveError::Order(format!(
                "{:?} is the remote point",
                space.label(i)
            )));
        }
        if seen[i] {
            return Err(CurveError::Order(format!("{:?} repeated", space.label(i))));
        }
        seen[i] = true;
    }
    Ok(())
}
