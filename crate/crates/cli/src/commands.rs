use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use ptolemy_core::circle::{
    circle_from_curve, circle_moebius_map, curve_from_circle, CircleInput, HalfplaneCurve,
};
use ptolemy_core::curve::CurveError;
use ptolemy_core::glued::{equator_angles, exotic_report, GluedSpaceConfig};
use ptolemy_core::io::{csv_table, parse_space, space_to_json, CurveFile, LabelMap};
use ptolemy_core::metric::{all_triples_collinear, circle_quadruple_census, is_ptolemy, line_embed};
use ptolemy_core::moebius::{bound_at, crt_equivalent, homothety_factor, invert_at, PointedCorrespondence};
use ptolemy_core::segment::{
    angle_parameterize, curve_from_segment, segment_from_curve, segment_moebius_map, QuadrantCurve,
    SegmentInput,
};
use ptolemy_core::sphere::{sample_space, SampleKind};
use ptolemy_core::ExtendedMetricSpace;

pub enum Outcome {
    Holds,
    Fails,
}

/// A property check that failed on well-formed input.
#[derive(Debug)]
pub struct Failure(String);

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failure {}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_space(path: &Path, eps: f64) -> Result<ExtendedMetricSpace> {
    parse_space(&read_text(path)?, eps).with_context(|| format!("invalid distance matrix {}", path.display()))
}

fn read_curve(path: &Path, kind: &'static str) -> Result<CurveFile> {
    let file: CurveFile = serde_json::from_str(&read_text(path)?)
        .with_context(|| format!("invalid curve file {}", path.display()))?;
    let found = file.kind.as_deref().unwrap_or("segment");
    if found != kind {
        bail!(
            "{}: curve kind {found:?} where {kind:?} is expected",
            path.display()
        );
    }
    Ok(file)
}

/// Writes `text` to `path`, or to stdout when no path is given.
fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            println!("{}", text.trim_end());
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

fn labels_of<const K: usize>(space: &ExtendedMetricSpace, q: [usize; K]) -> [String; K] {
    q.map(|i| space.label(i).to_string())
}

/// Geometric failures become exit status 2; the rest are input errors.
fn curve_error(space: Option<&ExtendedMetricSpace>, e: CurveError) -> anyhow::Error {
    match e {
        CurveError::PtolemyEquality { quad, residual } => {
            let quad = match space {
                Some(s) => format!("{:?}", labels_of(s, quad)),
                None => format!("{quad:?}"),
            };
            Failure(format!(
                "Ptolemy equality fails on ordered quadruple {quad} (relative residual {residual:e})"
            ))
            .into()
        }
        CurveError::OutsideDomain { .. }
        | CurveError::ArgNotIncreasing { .. }
        | CurveError::NotConvex { .. }
        | CurveError::OutsideRegion { .. }
        | CurveError::NoSector { .. }
        | CurveError::NotMonotone { .. }
        | CurveError::Extrapolation { .. } => Failure(e.to_string()).into(),
        other => other.into(),
    }
}

fn index(space: &ExtendedMetricSpace, label: &str) -> Result<usize> {
    space.index_of(label).map_err(Into::into)
}

fn resolve_order(space: &ExtendedMetricSpace, order: Option<Vec<String>>) -> Result<Vec<usize>> {
    match order {
        Some(labels) => labels.iter().map(|l| index(space, l)).collect(),
        None => Ok((0..space.len()).collect()),
    }
}

fn position(space: &ExtendedMetricSpace, order: &[usize], label: &str) -> Result<usize> {
    let i = index(space, label)?;
    order
        .iter()
        .position(|&x| x == i)
        .with_context(|| format!("point {label:?} is not in the order"))
}

#[derive(Serialize)]
struct Census {
    on_circle: usize,
    total: usize,
}

#[derive(Serialize)]
struct CheckReport {
    points: Vec<String>,
    omega: Option<String>,
    ptolemy: bool,
    worst_quadruple: Option<[String; 4]>,
    worst_margin: Option<f64>,
    quadruples_checked: usize,
    circle_quadruples: Census,
    triples_collinear: bool,
    line_embedding: Option<Vec<f64>>,
}

pub fn check(path: &Path, eps: f64) -> Result<Outcome> {
    let space = read_space(path, eps)?;
    let report = is_ptolemy(&space, eps);
    let (on_circle, total) = circle_quadruple_census(&space, eps);
    let out = CheckReport {
        points: space.labels().to_vec(),
        omega: space.omega().map(|w| space.label(w).to_string()),
        ptolemy: report.holds,
        worst_quadruple: report.worst_quadruple.map(|q| labels_of(&space, q)),
        worst_margin: report.worst_margin,
        quadruples_checked: report.quadruples_checked,
        circle_quadruples: Census { on_circle, total },
        triples_collinear: all_triples_collinear(&space, eps),
        line_embedding: line_embed(&space, eps),
    };
    emit(None, &to_json(&out))?;
    Ok(if report.holds {
        Outcome::Holds
    } else {
        Outcome::Fails
    })
}

pub fn invert(
    path: &Path,
    at: Option<&str>,
    bound: Option<&str>,
    output: Option<&Path>,
    verify: bool,
    eps: f64,
) -> Result<Outcome> {
    let space = read_space(path, eps)?;
    let result = match (at, bound) {
        (Some(z), None) => invert_at(&space, index(&space, z)?, eps)?,
        (None, Some(o)) => bound_at(&space, index(&space, o)?, eps)?,
        _ => bail!("give exactly one of --at and --bound-at"),
    };
    emit(output, &(space_to_json(&result) + "\n"))?;
    if !verify {
        return Ok(Outcome::Holds);
    }
    if space.len() < 4 {
        eprintln!("crt check skipped: fewer than four points");
        return Ok(Outcome::Holds);
    }
    let corr = PointedCorrespondence::by_label(&space, &result)?;
    let report = crt_equivalent(&corr, eps)?;
    eprintln!(
        "crt check: max deviation {:e} over {} quadruples",
        report.max_deviation, report.quadruples_checked
    );
    if report.equivalent {
        Ok(Outcome::Holds)
    } else {
        let w = report.witness.map(|q| labels_of(&space, q));
        Err(Failure(format!("inversion changed the cross ratios of {w:?}")).into())
    }
}

#[derive(Serialize)]
struct EquivReport {
    equivalent: bool,
    max_deviation: f64,
    witness: Option<[String; 4]>,
    quadruples_checked: usize,
    /// `λ` with `target = λ source`, when the correspondence is a homothety.
    homothety: Option<f64>,
}

pub fn equiv(source: &Path, target: &Path, map: Option<&Path>, eps: f64) -> Result<Outcome> {
    let src = read_space(source, eps)?;
    let dst = read_space(target, eps)?;
    let corr = match map {
        Some(p) => {
            let labels: LabelMap = serde_json::from_str(&read_text(p)?)
                .with_context(|| format!("invalid label map {}", p.display()))?;
            PointedCorrespondence::from_label_map(&src, &dst, &labels)?
        }
        None => PointedCorrespondence::by_label(&src, &dst)?,
    };
    let report = crt_equivalent(&corr, eps)?;
    let homothety = if map.is_none() && src.finite_indices().len() >= 2 {
        homothety_factor(&src, &dst, eps)?
    } else {
        None
    };
    let out = EquivReport {
        equivalent: report.equivalent,
        max_deviation: report.max_deviation,
        witness: report.witness.map(|q| labels_of(&src, q)),
        quadruples_checked: report.quadruples_checked,
        homothety,
    };
    emit(None, &to_json(&out))?;
    Ok(if report.equivalent {
        Outcome::Holds
    } else {
        Outcome::Fails
    })
}

pub fn segment_classify(
    path: &Path,
    order: Option<Vec<String>>,
    output: Option<&Path>,
    csv: Option<&Path>,
    eps: f64,
) -> Result<Outcome> {
    let space = read_space(path, eps)?;
    let order = resolve_order(&space, order)?;
    let curve = curve_from_segment(&space, &order, eps).map_err(|e| curve_error(Some(&space), e))?;
    if let Some(p) = csv {
        let rows = curve
            .params()
            .iter()
            .zip(angle_parameterize(&curve))
            .map(|(&t, (alpha, v))| vec![t, v.a, v.b, alpha]);
        emit(Some(p), &csv_table(&["t", "a", "b", "alpha"], rows))?;
    }
    emit(output, &to_json(&curve.to_file()))?;
    Ok(Outcome::Holds)
}

pub fn segment_synth(path: &Path, output: Option<&Path>, eps: f64) -> Result<Outcome> {
    let file = read_curve(path, "segment")?;
    let curve = QuadrantCurve::from_file(&file, eps).map_err(|e| curve_error(None, e))?;
    let space = segment_from_curve(&curve, eps).map_err(|e| curve_error(None, e))?;
    emit(output, &(space_to_json(&space) + "\n"))?;
    Ok(Outcome::Holds)
}

pub fn circle_classify(
    path: &Path,
    order: Option<Vec<String>>,
    minus_one: Option<String>,
    output: Option<&Path>,
    csv: Option<&Path>,
    eps: f64,
) -> Result<Outcome> {
    let space = read_space(path, eps)?;
    let order = resolve_order(&space, order)?;
    let m = minus_one.map(|l| position(&space, &order, &l)).transpose()?;
    let curve = curve_from_circle(&space, &order, m, eps).map_err(|e| curve_error(Some(&space), e))?;
    if let Some(p) = csv {
        let rows = curve
            .params()
            .iter()
            .zip(curve.samples())
            .map(|(&t, v)| vec![t, v.a, v.b]);
        emit(Some(p), &csv_table(&["t", "a", "b"], rows))?;
    }
    emit(output, &to_json(&curve.to_file()))?;
    Ok(Outcome::Holds)
}

pub fn circle_synth(path: &Path, output: Option<&Path>, eps: f64) -> Result<Outcome> {
    let file = read_curve(path, "circle")?;
    let curve = HalfplaneCurve::from_file(&file, eps).map_err(|e| curve_error(None, e))?;
    let space = circle_from_curve(&curve, eps).map_err(|e| curve_error(None, e))?;
    emit(output, &(space_to_json(&space) + "\n"))?;
    Ok(Outcome::Holds)
}

#[derive(Debug, Clone, Copy)]
pub enum MapKind {
    Segment,
    Circle,
}

pub struct MapRequest {
    pub source: PathBuf,
    pub target: PathBuf,
    pub anchors: Option<Vec<String>>,
    pub onto: Option<Vec<String>>,
    pub order: Option<Vec<String>>,
    pub target_order: Option<Vec<String>>,
    pub minus_one: Option<String>,
    pub target_minus_one: Option<String>,
    pub tol: f64,
    pub output: Option<PathBuf>,
}

fn anchor_positions(
    space: &ExtendedMetricSpace,
    order: &[usize],
    labels: Option<Vec<String>>,
    kind: MapKind,
) -> Result<[usize; 3]> {
    let n = order.len();
    if n < 3 {
        bail!("need at least 3 points to place anchors, found {n}");
    }
    match labels {
        Some(l) if l.len() == 3 => Ok([
            position(space, order, &l[0])?,
            position(space, order, &l[1])?,
            position(space, order, &l[2])?,
        ]),
        Some(l) => bail!("expected 3 anchors, found {}", l.len()),
        None => Ok(match kind {
            MapKind::Segment => [0, n / 2, n - 1],
            MapKind::Circle => [0, n / 3, 2 * n / 3],
        }),
    }
}

#[derive(Serialize)]
struct MapReport {
    kind: &'static str,
    tolerance: f64,
    preserved: bool,
    #[serde(flatten)]
    map: ptolemy_core::moebius_map::MoebiusMap,
}

pub fn map(kind: MapKind, req: MapRequest, eps: f64) -> Result<Outcome> {
    let src = read_space(&req.source, eps)?;
    let dst = read_space(&req.target, eps)?;
    let src_order = resolve_order(&src, req.order)?;
    let dst_order = resolve_order(&dst, req.target_order)?;
    let src_anchors = anchor_positions(&src, &src_order, req.anchors, kind)?;
    let dst_anchors = anchor_positions(&dst, &dst_order, req.onto, kind)?;
    let result = match kind {
        MapKind::Segment => segment_moebius_map(
            SegmentInput {
                space: &src,
                order: &src_order,
                anchors: src_anchors,
            },
            SegmentInput {
                space: &dst,
                order: &dst_order,
                anchors: dst_anchors,
            },
            eps,
        ),
        MapKind::Circle => {
            let m = req
                .minus_one
                .map(|l| position(&src, &src_order, &l))
                .transpose()?;
            let tm = req
                .target_minus_one
                .map(|l| position(&dst, &dst_order, &l))
                .transpose()?;
            circle_moebius_map(
                CircleInput {
                    space: &src,
                    order: &src_order,
                    anchors: src_anchors,
                    minus_one: m,
                },
                CircleInput {
                    space: &dst,
                    order: &dst_order,
                    anchors: dst_anchors,
                    minus_one: tm,
                },
                eps,
            )
        }
    }
    .map_err(|e| curve_error(None, e))?;
    let preserved = result.max_crt_deviation <= req.tol;
    let out = MapReport {
        kind: match kind {
            MapKind::Segment => "segment",
            MapKind::Circle => "circle",
        },
        tolerance: req.tol,
        preserved,
        map: result,
    };
    emit(req.output.as_deref(), &to_json(&out))?;
    Ok(if preserved { Outcome::Holds } else { Outcome::Fails })
}

#[derive(Serialize)]
struct SphereReport {
    kind: SampleKind,
    n: usize,
    count: usize,
    seed: u64,
    ptolemy: bool,
    worst_quadruple: Option<[String; 4]>,
    worst_margin: Option<f64>,
    quadruples_checked: usize,
    circle_quadruples: Census,
}

pub fn sphere(
    kind: SampleKind,
    n: usize,
    count: usize,
    seed: u64,
    output: Option<&Path>,
    eps: f64,
) -> Result<Outcome> {
    let space = sample_space(kind, n, count, seed, eps)?;
    let report = is_ptolemy(&space, eps);
    let (on_circle, total) = circle_quadruple_census(&space, eps);
    if let Some(p) = output {
        emit(Some(p), &(space_to_json(&space) + "\n"))?;
    }
    let out = SphereReport {
        kind,
        n,
        count,
        seed,
        ptolemy: report.holds,
        worst_quadruple: report.worst_quadruple.map(|q| labels_of(&space, q)),
        worst_margin: report.worst_margin,
        quadruples_checked: report.quadruples_checked,
        circle_quadruples: Census { on_circle, total },
    };
    emit(None, &to_json(&out))?;
    Ok(if report.holds {
        Outcome::Holds
    } else {
        Outcome::Fails
    })
}

pub fn exotic(
    l: f64,
    t_max: f64,
    seam_tol: f64,
    equator: usize,
    output: Option<&Path>,
    eps: f64,
) -> Result<Outcome> {
    let cfg = GluedSpaceConfig::new(l, t_max, seam_tol)?;
    let report = exotic_report(&cfg, &equator_angles(equator), eps)?;
    emit(output, &to_json(&report))?;
    Ok(Outcome::Holds)
}
