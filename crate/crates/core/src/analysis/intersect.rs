//! Self-intersection of sampled curves, with exact orientation tests on
//! the polyline and Newton refinement on the smooth curve.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{grid, AnalysisError, CurveSpan};
use crate::hgeom::{curve_jet, Derivatives, PlaneCurve};
use crate::leafgen::Leaf;

/// Largest `|C(s) − C(s')|` accepted for a refined crossing.
pub const CROSSING_RESIDUAL: f64 = 1e-8;

const NEWTON_STEPS: usize = 60;
const MAX_REFINE_DEPTH: u32 = 40;

#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionReport {
    pub found: bool,
    /// Parameters `s < s'` of the two branches at the crossing.
    pub params: Option<(f64, f64)>,
    pub point: Option<[f64; 2]>,
    pub residual: Option<f64>,
    pub segments: usize,
}

impl IntersectionReport {
    fn none(segments: usize) -> Self {
        IntersectionReport {
            found: false,
            params: None,
            point: None,
            residual: None,
            segments,
        }
    }
}

/// Shewchuk's first-stage bound for the 2×2 orientation determinant.
const ORIENT_BOUND: f64 = (3.0 + 16.0 * f64::EPSILON) * f64::EPSILON;

/// Sign of `(b − a) × (c − a)`, exact.
fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Ordering {
    let t1 = (a[0] - c[0]) * (b[1] - c[1]);
    let t2 = (a[1] - c[1]) * (b[0] - c[0]);
    let det = t1 - t2;
    if det.abs() > ORIENT_BOUND * (t1.abs() + t2.abs()) {
        return det.partial_cmp(&0.0).unwrap();
    }
    let q = |v: f64| BigRational::from_float(v).expect("finite coordinate");
    let (ax, ay, bx, by, cx, cy) = (q(a[0]), q(a[1]), q(b[0]), q(b[1]), q(c[0]), q(c[1]));
    let det = (&ax - &cx) * (&by - &cy) - (&ay - &cy) * (&bx - &cx);
    if det.is_zero() {
        Ordering::Equal
    } else if det.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// `c` lies in the bounding box of `a, b` (used once collinearity is known).
fn within(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> bool {
    c[0] >= a[0].min(b[0]) && c[0] <= a[0].max(b[0]) && c[1] >= a[1].min(b[1]) && c[1] <= a[1].max(b[1])
}

/// Closed segments `ab` and `cd` share a point. Touching counts.
fn segments_meet(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 != o2 && o3 != o4 && o1 != Ordering::Equal && o2 != Ordering::Equal
        && o3 != Ordering::Equal && o4 != Ordering::Equal
    {
        return true;
    }
    (o1 == Ordering::Equal && within(a, b, c))
        || (o2 == Ordering::Equal && within(a, b, d))
        || (o3 == Ordering::Equal && within(c, d, a))
        || (o4 == Ordering::Equal && within(c, d, b))
}

/// Fractions along `ab` and `cd` of a common point.
fn meeting_fractions(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> (f64, f64) {
    let r = [b[0] - a[0], b[1] - a[1]];
    let s = [d[0] - c[0], d[1] - c[1]];
    let den = r[0] * s[1] - r[1] * s[0];
    let ca = [c[0] - a[0], c[1] - a[1]];
    if den != 0.0 {
        let t = (ca[0] * s[1] - ca[1] * s[0]) / den;
        let u = (ca[0] * r[1] - ca[1] * r[0]) / den;
        return (t.clamp(0.0, 1.0), u.clamp(0.0, 1.0));
    }
    // collinear overlap: report an endpoint lying on the other segment
    let frac = |p: [f64; 2], q0: [f64; 2], q1: [f64; 2]| {
        let v = [q1[0] - q0[0], q1[1] - q0[1]];
        let n = v[0] * v[0] + v[1] * v[1];
        if n == 0.0 {
            0.0
        } else {
            (((p[0] - q0[0]) * v[0] + (p[1] - q0[1]) * v[1]) / n).clamp(0.0, 1.0)
        }
    };
    if within(c, d, a) {
        (0.0, frac(a, c, d))
    } else if within(c, d, b) {
        (1.0, frac(b, c, d))
    } else if within(a, b, c) {
        (frac(c, a, b), 0.0)
    } else {
        (frac(d, a, b), 1.0)
    }
}

/// Consecutive segments `pq`, `qr` fold back over each other.
fn folds_back(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> bool {
    orient(p, q, r) == Ordering::Equal
        && (q[0] - p[0]) * (r[0] - q[0]) + (q[1] - p[1]) * (r[1] - q[1]) < 0.0
}

/// First crossing (lowest segment pair) of the polyline through
/// `points`, whose parameters are `params`. With `closed`, the first and
/// last points coincide and the end segments count as adjacent.
/// Consecutive points must be closer than `10·tol`.
pub fn self_intersection_polyline(
    params: &[f64],
    points: &[[f64; 2]],
    closed: bool,
    tol: f64,
) -> Result<IntersectionReport, AnalysisError> {
    if params.len() != points.len() {
        return Err(AnalysisError::InvalidInput(format!(
            "{} parameters for {} points",
            params.len(),
            points.len()
        )));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(AnalysisError::InvalidInput(format!("tolerance {tol} must be positive")));
    }
    if points.len() < 2 {
        return Err(AnalysisError::EmptyPlan);
    }
    if let Some(bad) = points.iter().position(|p| !(p[0].is_finite() && p[1].is_finite())) {
        return Err(AnalysisError::Evaluation {
            at: params[bad],
            reason: "non-finite sample".into(),
        });
    }
    let limit = 10.0 * tol;
    for (i, w) in points.windows(2).enumerate() {
        let spacing = (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]);
        if spacing >= limit {
            return Err(AnalysisError::InsufficientDensity { index: i, spacing, limit });
        }
    }
    let m = points.len() - 1;
    let adjacent = |i: usize, j: usize| j == i + 1 || (closed && i == 0 && j == m - 1);
    let seg = |i: usize| (points[i], points[i + 1]);

    let mut best: Option<(usize, usize)> = None;
    let mut consider = |i: usize, j: usize| {
        let pair = (i.min(j), i.max(j));
        if best.is_none_or(|b| pair < b) {
            best = Some(pair);
        }
    };
    for i in 0..m.saturating_sub(1) {
        if folds_back(points[i], points[i + 1], points[i + 2]) {
            consider(i, i + 1);
        }
    }
    if closed && m >= 2 && folds_back(points[m - 1], points[m], points[1]) {
        consider(0, m - 1);
    }

    let mut order: Vec<usize> = (0..m).collect();
    let min_x = |i: usize| points[i][0].min(points[i + 1][0]);
    order.sort_by(|&a, &b| min_x(a).total_cmp(&min_x(b)).then(a.cmp(&b)));
    for (k, &i) in order.iter().enumerate() {
        let (a, b) = seg(i);
        let max_x = a[0].max(b[0]);
        let (lo_y, hi_y) = (a[1].min(b[1]), a[1].max(b[1]));
        for &j in &order[k + 1..] {
            if min_x(j) > max_x {
                break;
            }
            let (lo, hi) = (i.min(j), i.max(j));
            if adjacent(lo, hi) {
                continue;
            }
            let (c, d) = seg(j);
            if c[1].max(d[1]) < lo_y || c[1].min(d[1]) > hi_y {
                continue;
            }
            if segments_meet(a, b, c, d) {
                consider(i, j);
            }
        }
    }
    let Some((i, j)) = best else {
        return Ok(IntersectionReport::none(m));
    };
    let (a, b) = seg(i);
    let (c, d) = seg(j);
    let (t, u) = meeting_fractions(a, b, c, d);
    let point = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    let s = params[i] + t * (params[i + 1] - params[i]);
    let s2 = params[j] + u * (params[j + 1] - params[j]);
    Ok(IntersectionReport {
        found: true,
        params: Some((s, s2)),
        point: Some(point),
        residual: None,
        segments: m,
    })
}

/// Newton iteration on `C(s) = C(t)` from a polyline crossing.
fn refine(
    curve: &dyn PlaneCurve,
    method: Derivatives,
    mut s: f64,
    mut t: f64,
) -> Result<(f64, f64, f64), AnalysisError> {
    let residual = |s: f64, t: f64| {
        let (p, q) = (curve.point(s), curve.point(t));
        (p[0] - q[0]).hypot(p[1] - q[1])
    };
    let mut best = (s, t, residual(s, t));
    for _ in 0..NEWTON_STEPS {
        if best.2 <= CROSSING_RESIDUAL * 1e-4 {
            break;
        }
        let (Ok(js), Ok(jt)) = (curve_jet(curve, s, method), curve_jet(curve, t, method)) else {
            break;
        };
        let f = [js.point[0] - jt.point[0], js.point[1] - jt.point[1]];
        // J = [C'(s), −C'(t)]
        let (a, b, c, d) = (js.d1[0], -jt.d1[0], js.d1[1], -jt.d1[1]);
        let det = a * d - b * c;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        s -= (d * f[0] - b * f[1]) / det;
        t -= (-c * f[0] + a * f[1]) / det;
        let r = residual(s, t);
        if r < best.2 {
            best = (s, t, r);
        }
    }
    Ok(best)
}

/// Samples the curve at `samples` parameters, finds the first polyline
/// crossing and refines it to a crossing of the curve itself.
pub fn self_intersection(
    span: CurveSpan<'_>,
    samples: usize,
    tol: f64,
) -> Result<IntersectionReport, AnalysisError> {
    let ss = grid(span.s0, span.s1, samples);
    let mut pts: Vec<[f64; 2]> = ss.iter().map(|&s| span.curve.point(s)).collect();
    if span.closed {
        // close exactly so the seam is a shared vertex
        let first = pts[0];
        *pts.last_mut().unwrap() = first;
    }
    let mut report = self_intersection_polyline(&ss, &pts, span.closed, tol)?;
    let Some((s, t)) = report.params else {
        return Ok(report);
    };
    let method = if span.curve.jet(s).is_some() {
        Derivatives::Analytic
    } else {
        Derivatives::Central { arc_step: 1e-5 }
    };
    let (rs, rt, res) = refine(span.curve, method, s, t)?;
    let period = span.s1 - span.s0;
    let gap = (rs - rt).abs();
    let distinct = if span.closed {
        gap.min((period - gap % period).abs()) > 1e3 * tol.min(1e-6)
    } else {
        gap > 1e3 * tol.min(1e-6)
    };
    if !(res <= CROSSING_RESIDUAL && distinct) {
        return Err(AnalysisError::UnverifiedCrossing { s, t, residual: res });
    }
    let (lo, hi) = if rs <= rt { (rs, rt) } else { (rt, rs) };
    report.params = Some((lo, hi));
    report.point = Some(span.curve.point(lo));
    report.residual = Some(res);
    Ok(report)
}

/// Parameters and plane points of a leaf as a polyline in
/// `(θ, asinh ρ)` (H²) or `(x, asinh y)` (E²), where the leaf is a graph
/// of bounded height at any scale. Each segment gets `per_segment`
/// samples; gaps wider than `5·tol` are bisected.
pub fn leaf_polyline(
    leaf: &Leaf,
    per_segment: usize,
    tol: f64,
) -> Result<(Vec<f64>, Vec<[f64; 2]>), AnalysisError> {
    let (lo, hi, cuts) = match leaf {
        Leaf::H2(l) => {
            let m = if l.is_pure_horocycle() { l.params().delta } else { l.theta_min() };
            (m, std::f64::consts::PI - m, l.breakpoints())
        }
        Leaf::E2(l) => (-l.x_max(), l.x_max(), l.breakpoints()),
    };
    let eval = |t: f64| -> Result<[f64; 2], AnalysisError> {
        let v = match leaf {
            Leaf::H2(l) => l.eval(t)?,
            Leaf::E2(l) => {
                let y = l.base_log_height(t)?;
                let c = l.offset();
                if y > 700.0 {
                    // asinh(e^Y + c) ≈ Y + ln 2 once e^Y dwarfs c
                    return Ok([t, y + std::f64::consts::LN_2]);
                }
                y.exp() + c
            }
        };
        Ok([t, v.asinh()])
    };
    let mut knots = vec![lo];
    knots.extend(cuts.into_iter().filter(|&c| c > lo && c < hi));
    knots.push(hi);
    let mut params = vec![lo];
    let mut points = vec![eval(lo)?];
    let gap = 5.0 * tol;
    for w in knots.windows(2) {
        for &t in grid(w[0], w[1], per_segment).iter().skip(1) {
            let p = eval(t)?;
            push_refined(&eval, &mut params, &mut points, t, p, gap, 0)?;
        }
    }
    Ok((params, points))
}

fn push_refined<F: Fn(f64) -> Result<[f64; 2], AnalysisError>>(
    eval: &F,
    params: &mut Vec<f64>,
    points: &mut Vec<[f64; 2]>,
    t: f64,
    p: [f64; 2],
    gap: f64,
    depth: u32,
) -> Result<(), AnalysisError> {
    let (t0, p0) = (*params.last().unwrap(), *points.last().unwrap());
    let far = (p[0] - p0[0]).hypot(p[1] - p0[1]) >= gap;
    let mid = 0.5 * (t0 + t);
    if far && depth < MAX_REFINE_DEPTH && mid > t0 && mid < t {
        let pm = eval(mid)?;
        push_refined(eval, params, points, mid, pm, gap, depth + 1)?;
        return push_refined(eval, params, points, t, p, gap, depth + 1);
    }
    params.push(t);
    points.push(p);
    Ok(())
}

/// Self-intersection test of a leaf in graph coordinates.
pub fn leaf_self_intersection(
    leaf: &Leaf,
    per_segment: usize,
    tol: f64,
) -> Result<IntersectionReport, AnalysisError> {
    let (params, points) = leaf_polyline(leaf, per_segment, tol)?;
    self_intersection_polyline(&params, &points, false, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{EuclideanCircle, FigureEight, HorizontalLine, LoopedSpiral};
    use crate::leafgen::{build_h2_leaf, ConstructionParams, LeafCurve};
    use crate::growth::GrowthOracle;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn brute_orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Ordering {
        let q = |v: f64| BigRational::from_float(v).unwrap();
        let det = (q(b[0]) - q(a[0])) * (q(c[1]) - q(a[1])) - (q(b[1]) - q(a[1])) * (q(c[0]) - q(a[0]));
        det.cmp(&BigRational::zero())
    }

    proptest! {
        #[test]
        fn orientation_matches_exact(ax in -1e3f64..1e3, ay in -1e3f64..1e3, bx in -1e3f64..1e3,
                                     by in -1e3f64..1e3, t in -2.0f64..2.0, e in -1e-12f64..1e-12) {
            let a = [ax, ay];
            let b = [bx, by];
            let c = [ax + t * (bx - ax) + e, ay + t * (by - ay)];
            prop_assert_eq!(orient(a, b, c), brute_orient(a, b, c));
        }
    }

    #[test]
    fn nearly_collinear_needs_exact() {
        let a = [0.5, 0.5];
        let b = [12.0, 12.0];
        let c = [24.0, 24.0];
        assert_eq!(orient(a, b, c), Ordering::Equal);
        let c2 = [24.0, 24.000000000000004];
        assert_eq!(orient(a, b, c2), brute_orient(a, b, c2));
        assert_eq!(orient(a, b, c2), Ordering::Greater);
    }

    #[test]
    fn touching_counts() {
        assert!(segments_meet([0.0, 0.0], [2.0, 0.0], [1.0, 0.0], [1.0, 5.0]));
        assert!(!segments_meet([0.0, 0.0], [2.0, 0.0], [1.0, 1e-300], [1.0, 5.0]));
    }

    fn fig(samples: usize) -> Result<IntersectionReport, AnalysisError> {
        let f = FigureEight { center: [0.0, 3.0], scale: 1.0 };
        self_intersection(CurveSpan { curve: &f, s0: 0.0, s1: 2.0 * PI, closed: true }, samples, 1e-3)
    }

    #[test]
    fn figure_eight_crossing() {
        let r = fig(2001).unwrap();
        assert!(r.found);
        let (s, t) = r.params.unwrap();
        let (a, b) = FigureEight::CROSSING_PARAMS;
        assert!((s - a).abs() < 1e-9 && (t - b).abs() < 1e-9, "{s} {t}");
        assert!(r.residual.unwrap() <= CROSSING_RESIDUAL);
        let p = r.point.unwrap();
        assert!(p[0].abs() < 1e-9 && (p[1] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn density_guard() {
        assert!(matches!(fig(50), Err(AnalysisError::InsufficientDensity { .. })));
    }

    #[test]
    fn spiral_crossing() {
        let sp = LoopedSpiral { center: [0.0, 4.0], inner: 0.5, outer: 1.0 };
        let r = self_intersection(CurveSpan { curve: &sp, s0: 0.0, s1: 2.0 * PI, closed: true }, 3001, 1e-3)
            .unwrap();
        let (s, t) = r.params.unwrap();
        let (a, b) = sp.crossing_params();
        assert!((s - a).abs() < 1e-8 && (t - b).abs() < 1e-8, "{s} {t}");
    }

    #[test]
    fn embedded_curves() {
        let c = EuclideanCircle { center: [0.0, 2.0], radius: 1.0 };
        let r = self_intersection(CurveSpan { curve: &c, s0: 0.0, s1: 2.0 * PI, closed: true }, 2000, 1e-3).unwrap();
        assert!(!r.found);
        let h = HorizontalLine { height: 1.0 };
        let r = self_intersection(CurveSpan { curve: &h, s0: -10.0, s1: 10.0, closed: false }, 4001, 1e-3).unwrap();
        assert!(!r.found);
    }

    #[test]
    fn fold_back_is_a_crossing() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [0.5, 0.0]];
        let r = self_intersection_polyline(&[0.0, 1.0, 2.0], &pts, false, 1.0).unwrap();
        assert!(r.found);
    }

    #[test]
    fn leaves_are_embedded() {
        let mut p = ConstructionParams::default_h2();
        p.samples_per_segment = 512;
        let leaf = Leaf::H2(build_h2_leaf(&p, &GrowthOracle::Tower).unwrap());
        let r = leaf_self_intersection(&leaf, 256, 1e-3).unwrap();
        assert!(!r.found);
        let (_, pts) = leaf_polyline(&leaf, 256, 1e-3).unwrap();
        for w in pts.windows(2) {
            assert!((w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]) < 5e-3);
        }
        let h = Leaf::H2(LeafCurve::horocycle(0.1));
        assert!(!leaf_self_intersection(&h, 64, 1e-3).unwrap().found);
    }
}
