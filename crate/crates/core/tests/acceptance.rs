//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.
//!
//! Every check compares library output against an oracle computed here from
//! first principles (coordinates, closed forms, direct products of distances).

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ptolemy_core::circle::{
    chordal_circle_curve, circle_from_curve, circle_moebius_map, curve_from_circle, CircleInput,
    HalfplaneCurve,
};
use ptolemy_core::glued::{
    equator_angles, exotic_report, gromov_product, Base, BoundaryPoint, GluedSpaceConfig,
};
use ptolemy_core::metric::{crt, is_admissible, is_circle_quadruple, is_ptolemy, line_embed};
use ptolemy_core::moebius::{bound_at, invert_at};
use ptolemy_core::moebius_map::MoebiusMap;
use ptolemy_core::planar::{ptolemy_identity_magnitude, ptolemy_identity_residual, Vec2};
use ptolemy_core::segment::{
    curve_from_segment, euclidean_segment_curve, inscribed_angle, random_convex_curve, segment_from_curve,
    segment_moebius_map, straight_curve, ArcBranch, QuadrantCurve, SegmentInput,
};
use ptolemy_core::sphere::{circumcircle_three, sample_space, SampleKind};
use ptolemy_core::tolerance::EPS_REL;
use ptolemy_core::ExtendedMetricSpace;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn euclid(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

fn quads(n: usize) -> impl Iterator<Item = [usize; 4]> {
    (0..n).flat_map(move |i| {
        (i + 1..n).flat_map(move |j| (j + 1..n).flat_map(move |k| (k + 1..n).map(move |l| [i, j, k, l])))
    })
}

/// `(d12 d34, d13 d24, d14 d23)` normalized to sum 1, for finite distances.
fn triple(d: impl Fn(usize, usize) -> f64, [a, b, c, e]: [usize; 4]) -> Option<[f64; 3]> {
    let t = [d(a, b) * d(c, e), d(a, c) * d(b, e), d(a, e) * d(b, c)];
    let s: f64 = t.iter().sum();
    (s > 0.0).then(|| t.map(|x| x / s))
}

/// Relative residual of `d13 d24 = d12 d34 + d14 d23` for an ordered quadruple.
fn ordered_residual(d: impl Fn(usize, usize) -> f64, [a, b, c, e]: [usize; 4]) -> f64 {
    let lhs = d(a, c) * d(b, e);
    let rhs = d(a, b) * d(c, e) + d(a, e) * d(b, c);
    let scale = lhs.max(rhs);
    if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs).abs() / scale
    }
}

fn max_ordered_residual(space: &ExtendedMetricSpace) -> f64 {
    quads(space.len())
        .map(|q| ordered_residual(|i, j| space.dist(i, j), q))
        .fold(0.0, f64::max)
}

/// Ptolemy inequality on every 4-subset: no product exceeds the sum of the
/// other two.
fn ptolemy_oracle(space: &ExtendedMetricSpace, eps: f64) -> bool {
    quads(space.len()).all(|q| match triple(|i, j| space.dist(i, j), q) {
        Some(t) => t.iter().all(|&x| x <= 0.5 + eps),
        None => true,
    })
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let kinds = [
        (SampleKind::Euclidean, 2),
        (SampleKind::Euclidean, 3),
        (SampleKind::Euclidean, 4),
        (SampleKind::Sphere, 2),
        (SampleKind::Hemisphere, 2),
    ];
    let mut quadruples = 0;
    for seed in 0..1000u64 {
        let (kind, n) = kinds[seed as usize % kinds.len()];
        let count = 4 + (seed as usize * 7) % 9;
        let space = sample_space(kind, n, count, seed, EPS_REL).map_err(|e| e.to_string())?;
        let report = is_ptolemy(&space, EPS_REL);
        ensure(report.holds, || {
            format!(
                "{kind} n={n} seed={seed}: margin {:?} at {:?}",
                report.worst_margin, report.worst_quadruple
            )
        })?;
        ensure(ptolemy_oracle(&space, EPS_REL), || {
            format!("oracle disagrees on {kind} seed {seed}")
        })?;
        quadruples += report.quadruples_checked;
    }
    for seed in 0..200u64 {
        let n = 2 + seed as usize % 3;
        let count = 4 + seed as usize % 9;
        let space = sample_space(SampleKind::L1, n, count, seed, EPS_REL).map_err(|e| e.to_string())?;
        ensure(!is_ptolemy(&space, EPS_REL).holds, || {
            format!("l1 control seed {seed} passed")
        })?;
        ensure(!ptolemy_oracle(&space, EPS_REL), || {
            format!("oracle accepts l1 control seed {seed}")
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "1000 corpora ({quadruples} quadruples) Ptolemy, 200 l1 controls rejected, {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn criterion_2() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let m = 24;
    let mut worst: f64 = 0.0;
    let mut on_circle: f64 = 0.0;
    for case in 0..100 {
        let k = 2 + case % 3;
        let pts: Vec<Vec<f64>> = (0..3)
            .map(|_| (0..k).map(|_| rng.random_range(-3.0..3.0)).collect())
            .collect();
        let c = circumcircle_three(&pts[0], &pts[1], &pts[2]).map_err(|e| format!("case {case}: {e}"))?;
        for p in &pts {
            on_circle = on_circle.max((euclid(p, &c.center) - c.radius).abs() / c.radius);
        }
        let s = c.samples(m);
        for q in quads(m) {
            worst = worst.max(ordered_residual(|i, j| euclid(&s[i], &s[j]), q));
        }
        let space = c.sample_space(m, EPS_REL).map_err(|e| e.to_string())?;
        for q in [[0, 5, 11, 17], [1, 2, 3, 23]] {
            ensure(is_circle_quadruple(&space, q, 1e-9).unwrap_or(false), || {
                format!("case {case}: {q:?} not on the boundary")
            })?;
        }
    }
    ensure(on_circle <= 1e-10, || {
        format!("inputs off the circle by {on_circle:e}")
    })?;
    ensure(worst <= 1e-9, || format!("Ptolemy equality residual {worst:e}"))?;
    Ok(format!(
        "100 circles x 10626 ordered quadruples, max residual {worst:.1e}"
    ))
}

fn spaces_for_inversion() -> Result<Vec<ExtendedMetricSpace>, String> {
    let kinds = [
        (SampleKind::Sphere, 2),
        (SampleKind::Hemisphere, 3),
        (SampleKind::Euclidean, 2),
        (SampleKind::Euclidean, 4),
        (SampleKind::Halfspace, 2),
        (SampleKind::BallComplement, 3),
        (SampleKind::Line, 1),
    ];
    (0..100u64)
        .map(|seed| {
            let (kind, n) = kinds[seed as usize % kinds.len()];
            sample_space(kind, n, 4 + seed as usize % 4, 300 + seed, EPS_REL).map_err(|e| e.to_string())
        })
        .collect()
}

fn rel_gap(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn crt_gap(a: &ExtendedMetricSpace, b: &ExtendedMetricSpace) -> Result<f64, String> {
    let n = a.len();
    let mut worst: f64 = 0.0;
    for i in 0..n.pow(4) {
        let q = [i % n, (i / n) % n, (i / n / n) % n, i / n / n / n];
        if !is_admissible(q) {
            continue;
        }
        match (crt(a, q), crt(b, q)) {
            (Ok(x), Ok(y)) => worst = worst.max(x.deviation(&y)),
            (Err(_), Err(_)) => {}
            _ => return Err(format!("{q:?} degenerate on one side only")),
        }
    }
    Ok(worst)
}

fn criterion_3() -> Check {
    let mut identity: f64 = 0.0;
    let mut invariance: f64 = 0.0;
    for (s, space) in spaces_for_inversion()?.iter().enumerate() {
        let finite = space.finite_indices();
        let z = finite[s % finite.len()];
        let w = finite[(s + 1) % finite.len()];
        let dz = invert_at(space, z, EPS_REL).map_err(|e| format!("space {s}: {e}"))?;
        let dw = invert_at(space, w, EPS_REL).map_err(|e| e.to_string())?;
        let dzw = invert_at(&dz, w, EPS_REL).map_err(|e| e.to_string())?;
        // (d_z)_w = d(z,w)² d_w.
        let k = space.dist(z, w).powi(2);
        for i in 0..space.len() {
            for j in 0..space.len() {
                identity = identity.max(rel_gap(dzw.dist(i, j), k * dw.dist(i, j)));
            }
        }
        // Inverting back at the old remote point restores the input.
        if let Some(omega) = space.omega() {
            let back = invert_at(&dz, omega, EPS_REL).map_err(|e| e.to_string())?;
            for i in 0..space.len() {
                for j in 0..space.len() {
                    identity = identity.max(rel_gap(back.dist(i, j), space.dist(i, j)));
                }
            }
        }
        let bounded = bound_at(space, w, EPS_REL).map_err(|e| e.to_string())?;
        ensure(bounded.rows().iter().flatten().all(|&d| d <= 1.0), || {
            format!("space {s}: bounded metric exceeds 1")
        })?;
        invariance = invariance
            .max(crt_gap(space, &dz)?)
            .max(crt_gap(space, &bounded)?);
    }
    ensure(identity <= 1e-12, || {
        format!("double inversion off by {identity:e}")
    })?;
    ensure(invariance <= 1e-9, || format!("crt changed by {invariance:e}"))?;
    Ok(format!(
        "100 spaces, double inversion {identity:.1e}, crt invariance {invariance:.1e}"
    ))
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let det = |p: Vec2, q: Vec2| p.a * q.b - p.b * q.a;
    let mut worst: f64 = 0.0;
    for _ in 0..100_000 {
        let p: Vec<Vec2> = (0..4)
            .map(|_| Vec2::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)))
            .collect();
        let terms = [
            det(p[0], p[1]) * det(p[2], p[3]),
            det(p[1], p[2]) * det(p[0], p[3]),
            -det(p[0], p[2]) * det(p[1], p[3]),
        ];
        let mag: f64 = terms.iter().map(|t| t.abs()).sum();
        if mag == 0.0 {
            continue;
        }
        let own = terms.iter().sum::<f64>().abs() / mag;
        let lib = ptolemy_identity_residual(p[0], p[1], p[2], p[3]).abs()
            / ptolemy_identity_magnitude(p[0], p[1], p[2], p[3]);
        worst = worst.max(own).max(lib);
    }
    ensure(worst <= 1e-9, || format!("relative residual {worst:e}"))?;
    Ok(format!("100000 tuples, max relative residual {worst:.1e}"))
}

fn quarter_circle(n: usize) -> Result<QuadrantCurve, String> {
    let samples = (0..n)
        .map(|k| {
            let th = FRAC_PI_2 * k as f64 / (n - 1) as f64;
            match k {
                0 => Vec2::new(1.0, 0.0),
                _ if k == n - 1 => Vec2::new(0.0, 1.0),
                _ => Vec2::new(th.cos(), th.sin()),
            }
        })
        .collect();
    QuadrantCurve::new(1.0, samples, EPS_REL).map_err(|e| e.to_string())
}

fn criterion_5() -> Check {
    let mut curves: Vec<(String, QuadrantCurve)> = vec![
        (
            "straight".into(),
            straight_curve(1.0, 17, EPS_REL).map_err(|e| e.to_string())?,
        ),
        ("half-circle".into(), quarter_circle(17)?),
    ];
    for branch in [ArcBranch::Minor, ArcBranch::Major] {
        let c = euclidean_segment_curve(1.0, 1.0, branch, 17, EPS_REL).map_err(|e| e.to_string())?;
        curves.push((format!("ellipse {branch:?}"), c));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..50 {
        let r = rng.random_range(0.5..3.0);
        let n = rng.random_range(6..30);
        let c = random_convex_curve(r, n, &mut rng, EPS_REL).map_err(|e| format!("random {k}: {e}"))?;
        curves.push((format!("random {k}"), c));
    }

    // Oracle for the half-circle: d(s,t) = sin(π(t-s)/2).
    let half = segment_from_curve(&curves[1].1, EPS_REL).map_err(|e| e.to_string())?;
    for i in 0..17 {
        for j in 0..17 {
            let expect = (FRAC_PI_2 * (i as f64 - j as f64).abs() / 16.0).sin();
            ensure((half.dist(i, j) - expect).abs() <= 1e-12, || {
                format!("half-circle d({i},{j})")
            })?;
        }
    }

    let (mut roundtrip, mut equality): (f64, f64) = (0.0, 0.0);
    for (name, curve) in &curves {
        let space = segment_from_curve(curve, EPS_REL).map_err(|e| format!("{name}: {e}"))?;
        equality = equality.max(max_ordered_residual(&space));
        let order: Vec<usize> = (0..space.len()).collect();
        let back = curve_from_segment(&space, &order, EPS_REL).map_err(|e| format!("{name}: {e}"))?;
        ensure((back.r() - curve.r()).abs() <= 1e-12 * curve.r(), || {
            format!("{name}: R changed")
        })?;
        for (p, q) in curve.samples().iter().zip(back.samples()) {
            roundtrip = roundtrip.max((*p - *q).norm() / curve.r());
        }
    }
    ensure(roundtrip <= 1e-12, || format!("roundtrip error {roundtrip:e}"))?;
    ensure(equality <= 1e-9, || {
        format!("Ptolemy equality residual {equality:e}")
    })?;
    Ok(format!(
        "{} curves, roundtrip {roundtrip:.1e}, ordered residual {equality:.1e}",
        curves.len()
    ))
}

fn criterion_6() -> Check {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (r_chord, radius) in [(1.0, 0.5), (1.0, 1.0), (2.0, 1.0), (1.0, 3.0)] {
        for branch in [ArcBranch::Minor, ArcBranch::Major] {
            let curve =
                euclidean_segment_curve(r_chord, radius, branch, 33, EPS_REL).map_err(|e| e.to_string())?;
            // Chord from p = (h, -R/2) to q = (h, R/2) on the circle of the
            // given radius centered at the origin; minor arc on the right.
            let h = (radius * radius - r_chord * r_chord / 4.0).sqrt();
            let (p, q) = ([h, -r_chord / 2.0], [h, r_chord / 2.0]);
            let x = match branch {
                ArcBranch::Minor => [radius, 0.0],
                ArcBranch::Major => [-radius, 0.0],
            };
            let u = [p[0] - x[0], p[1] - x[1]];
            let v = [q[0] - x[0], q[1] - x[1]];
            let beta = (u[0] * v[1] - u[1] * v[0]).abs().atan2(u[0] * v[0] + u[1] * v[1]);
            ensure(
                (beta - inscribed_angle(r_chord, radius, branch)).abs() <= 1e-12,
                || format!("inscribed angle for ({r_chord}, {radius}, {branch:?})"),
            )?;
            for s in curve.samples() {
                let res = (s.a * s.a + s.b * s.b - 2.0 * s.a * s.b * beta.cos() - r_chord * r_chord).abs()
                    / (r_chord * r_chord);
                worst = worst.max(res);
                count += 1;
            }
        }
    }
    ensure(
        euclidean_segment_curve(1.0, 0.49, ArcBranch::Minor, 9, EPS_REL).is_err(),
        || "radius below R/2 accepted".into(),
    )?;
    ensure(worst <= 1e-9, || format!("ellipse residual {worst:e}"))?;
    Ok(format!("8 arcs, {count} samples, max residual {worst:.1e}"))
}

fn criterion_7() -> Check {
    let per_half = 12;
    let samples: Vec<Vec2> = (0..=2 * per_half)
        .map(|k| {
            let t = k as f64 / per_half as f64;
            Vec2::new(2.0 * (PI * t / 2.0).cos(), 2.0 * (PI * t / 2.0).sin())
        })
        .collect();
    let curve = HalfplaneCurve::new(2.0, samples, EPS_REL).map_err(|e| e.to_string())?;
    let space = circle_from_curve(&curve, EPS_REL).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for i in 0..space.len() {
        for j in 0..space.len() {
            let dt = (i as f64 - j as f64).abs() / per_half as f64;
            worst = worst.max((space.dist(i, j) - 2.0 * (PI * dt / 2.0).sin()).abs());
        }
    }
    ensure(space.len() == 2 * per_half, || format!("{} points", space.len()))?;
    ensure(worst <= 1e-12, || format!("chordal distances off by {worst:e}"))?;
    Ok(format!(
        "24 points on the R=2 chordal circle, max error {worst:.1e}"
    ))
}

/// crt deviation between source distances and image distances computed from
/// the image points of `map` on a curve of scale `r`.
fn map_deviation(source: &ExtendedMetricSpace, map: &MoebiusMap, r: f64) -> f64 {
    let img: Vec<Vec2> = map.entries.iter().map(|e| e.target_point).collect();
    let d_img = |i: usize, j: usize| (img[i].a * img[j].b - img[i].b * img[j].a).abs() / r;
    quads(img.len())
        .map(
            |q| match (triple(|i, j| source.dist(i, j), q), triple(d_img, q)) {
                (Some(a), Some(b)) => (0..3).map(|k| (a[k] - b[k]).abs()).fold(0.0, f64::max),
                (None, None) => 0.0,
                _ => 1.0,
            },
        )
        .fold(0.0, f64::max)
}

fn seg<'a>(space: &'a ExtendedMetricSpace, order: &'a [usize]) -> SegmentInput<'a> {
    let n = order.len();
    SegmentInput {
        space,
        order,
        anchors: [0, n / 2, n - 1],
    }
}

fn criterion_8() -> Check {
    let straight = segment_from_curve(
        &straight_curve(1.0, 13, EPS_REL).map_err(|e| e.to_string())?,
        EPS_REL,
    )
    .map_err(|e| e.to_string())?;
    let quarter = quarter_circle(9)?;
    let half = segment_from_curve(&quarter, EPS_REL).map_err(|e| e.to_string())?;
    let o13: Vec<usize> = (0..13).collect();
    let o9: Vec<usize> = (0..9).collect();

    // Self-maps fixing the anchors.
    let mut self_err: f64 = 0.0;
    for (space, order, curve) in [
        (
            &straight,
            &o13,
            straight_curve(1.0, 13, EPS_REL).map_err(|e| e.to_string())?,
        ),
        (&half, &o9, quarter.clone()),
    ] {
        let map =
            segment_moebius_map(seg(space, order), seg(space, order), EPS_REL).map_err(|e| e.to_string())?;
        for (k, e) in map.entries.iter().enumerate() {
            self_err = self_err
                .max((e.target_point - curve.samples()[k]).norm())
                .max((e.target_parameter - curve.params()[k]).abs());
        }
    }
    let c16 = chordal_circle_curve(1.0, 8, EPS_REL).map_err(|e| e.to_string())?;
    let s16 = circle_from_curve(&c16, EPS_REL).map_err(|e| e.to_string())?;
    let o16: Vec<usize> = (0..16).collect();
    let input = CircleInput {
        space: &s16,
        order: &o16,
        anchors: [0, 5, 11],
        minus_one: None,
    };
    let map = circle_moebius_map(input, input, EPS_REL).map_err(|e| e.to_string())?;
    for (k, e) in map.entries.iter().enumerate() {
        let gap = (e.target_parameter - c16.params()[k]).abs();
        self_err = self_err
            .max((e.target_point - c16.samples()[k]).norm())
            .max(gap.min(2.0 - gap));
    }
    ensure(self_err <= 1e-9, || {
        format!("self-map moves samples by {self_err:e}")
    })?;

    // Cross-maps, checked with image distances recomputed from the points.
    let mut cross: f64 = 0.0;
    let m = segment_moebius_map(seg(&straight, &o13), seg(&half, &o9), EPS_REL).map_err(|e| e.to_string())?;
    cross = cross.max(map_deviation(&straight, &m, 1.0));
    let m = segment_moebius_map(seg(&half, &o9), seg(&straight, &o13), EPS_REL).map_err(|e| e.to_string())?;
    cross = cross.max(map_deviation(&half, &m, 1.0));

    let small = circle_from_curve(
        &chordal_circle_curve(1.0, 12, EPS_REL).map_err(|e| e.to_string())?,
        EPS_REL,
    )
    .map_err(|e| e.to_string())?;
    let big = circle_from_curve(
        &chordal_circle_curve(5.0, 7, EPS_REL).map_err(|e| e.to_string())?,
        EPS_REL,
    )
    .map_err(|e| e.to_string())?;
    let (o24, o14): (Vec<usize>, Vec<usize>) = ((0..24).collect(), (0..14).collect());
    for (src, so, sa, dst, d_o, da) in [
        (&small, &o24, [0, 7, 15], &big, &o14, [3, 8, 11]),
        (&big, &o14, [2, 9, 4], &small, &o24, [20, 1, 13]),
    ] {
        let r = curve_from_circle(dst, d_o, None, EPS_REL)
            .map_err(|e| e.to_string())?
            .r();
        let m = circle_moebius_map(
            CircleInput {
                space: src,
                order: so,
                anchors: sa,
                minus_one: None,
            },
            CircleInput {
                space: dst,
                order: d_o,
                anchors: da,
                minus_one: None,
            },
            EPS_REL,
        )
        .map_err(|e| e.to_string())?;
        ensure(m.max_crt_deviation <= 1e-6, || {
            format!("reported deviation {:e}", m.max_crt_deviation)
        })?;
        cross = cross.max(map_deviation(src, &m, r));
    }
    ensure(cross <= 1e-6, || format!("cross-map crt deviation {cross:e}"))?;
    Ok(format!(
        "self-maps within {self_err:.1e}, cross-map crt deviation {cross:.1e}"
    ))
}

fn criterion_9() -> Check {
    let start = Instant::now();
    let mut lines = Vec::new();
    for l in [0.5f64, 1.0, 2.0] {
        let cfg = GluedSpaceConfig::with_length(l).map_err(|e| e.to_string())?;
        let ns = gromov_product(&cfg, Base::OPrime, BoundaryPoint::North, BoundaryPoint::South)
            .map_err(|e| e.to_string())?;
        ensure((ns - l.cosh().ln()).abs() <= 1e-6, || {
            format!("l={l}: (N.S)_o' = {ns}")
        })?;
        let r = exotic_report(&cfg, &equator_angles(6), EPS_REL).map_err(|e| e.to_string())?;
        let rho_ns = r.rho_oprime[0][1];
        let shrink = (-l).exp();
        ensure(rho_ns > shrink, || {
            format!("l={l}: rho_o'(N,S) = {rho_ns} <= e^-l")
        })?;
        ensure((r.homothety.equator_ratio - shrink).abs() <= 1e-9, || {
            format!("l={l}: equator ratio {}", r.homothety.equator_ratio)
        })?;
        ensure(r.homothety.equator_spread <= 1e-9, || {
            format!("l={l}: equator spread {:e}", r.homothety.equator_spread)
        })?;
        ensure(r.max_crt_dev <= 1e-5, || {
            format!("l={l}: crt deviation {:e}", r.max_crt_dev)
        })?;
        let gap = (1.0 / l.cosh() - shrink).abs();
        ensure((r.gap - gap).abs() <= 1e-6, || {
            format!("l={l}: gap {} vs {gap}", r.gap)
        })?;
        ensure(!r.homothetic, || format!("l={l}: reported homothetic"))?;
        if l == 1.0 {
            ensure((r.gap - 0.2802).abs() < 1e-4, || {
                format!("gap at l=1 is {}", r.gap)
            })?;
        }
        lines.push(format!("l={l}: gap {:.4}", r.gap));
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= Duration::from_secs(2), || format!("took {elapsed:?}"))?;
    Ok(format!("{}, {:.2}s", lines.join(", "), elapsed.as_secs_f64()))
}

fn triples_collinear_oracle(points: usize, d: impl Fn(usize, usize) -> f64, tol: f64) -> bool {
    (0..points).all(|i| {
        (i + 1..points).all(|j| {
            (j + 1..points).all(|k| {
                let mut e = [d(i, j), d(j, k), d(i, k)];
                e.sort_by(f64::total_cmp);
                (e[0] + e[1] - e[2]).abs() <= tol
            })
        })
    })
}

fn criterion_10() -> Check {
    for seed in 0..20u64 {
        let space = sample_space(SampleKind::Line, 1, 4 + seed as usize % 9, seed, EPS_REL)
            .map_err(|e| e.to_string())?;
        for q in quads(space.len()) {
            ensure(is_circle_quadruple(&space, q, EPS_REL).unwrap_or(false), || {
                format!("line seed {seed}: {q:?} off the circle")
            })?;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut positives, mut negatives) = (0, 0);
    for case in 0..200 {
        let n = rng.random_range(3..11);
        let pts: Vec<Vec<f64>> = match case % 4 {
            0 | 1 => (0..n).map(|_| vec![rng.random_range(-5.0..5.0)]).collect(),
            2 => (0..n)
                .map(|_| vec![rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)])
                .collect(),
            // Points on a line in the plane, one of them pushed off it.
            _ => (0..n)
                .map(|i| {
                    let t: f64 = rng.random_range(-5.0..5.0);
                    let off = if i == 0 { rng.random_range(0.01..1.0) } else { 0.0 };
                    vec![0.6 * t - 0.8 * off, 0.8 * t + 0.6 * off]
                })
                .collect(),
        };
        let labels = ExtendedMetricSpace::numbered_labels("x", n);
        let space = ExtendedMetricSpace::from_fn(labels, None, EPS_REL, |i, j| euclid(&pts[i], &pts[j]))
            .map_err(|e| e.to_string())?;
        let expected = triples_collinear_oracle(n, |i, j| euclid(&pts[i], &pts[j]), 1e-9 * space.scale());
        let got = line_embed(&space, EPS_REL);
        ensure(got.is_some() == expected, || {
            format!("case {case}: embed {} vs triples {expected}", got.is_some())
        })?;
        if let Some(x) = got {
            for i in 0..n {
                for j in 0..n {
                    ensure(
                        ((x[i] - x[j]).abs() - space.dist(i, j)).abs() <= 1e-9 * space.scale(),
                        || format!("case {case}: coordinates do not reproduce d({i},{j})"),
                    )?;
                }
            }
            positives += 1;
        } else {
            negatives += 1;
        }
    }
    ensure(positives >= 50 && negatives >= 50, || {
        format!("unbalanced cases: {positives}/{negatives}")
    })?;
    Ok(format!(
        "20 line+inf samples on circles, 200 embedding cases ({positives} embed, {negatives} do not)"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Ptolemy on Euclidean and spherical corpora", criterion_1),
        ("classical circle equality", criterion_2),
        ("inversion suite", criterion_3),
        ("signed-distance identity", criterion_4),
        ("segment classification roundtrip", criterion_5),
        ("ellipse family", criterion_6),
        ("chordal circle pin", criterion_7),
        ("Moebius maps", criterion_8),
        ("exotic sphere", criterion_9),
        ("line embedding", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
