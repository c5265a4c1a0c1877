//! Distortion profiles: pairs of leaf points with their ambient and
//! intrinsic distances.
//!
//! The distortion function is a supremum over all pairs at a given ambient
//! distance; finitely many pairs only ever give a lower bound for it.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use super::{grid, AnalysisError, CurveSpan};
use crate::egeom::{euc_distance, EPoint};
use crate::hgeom::{
    curve_jet, hyp_distance, polar_distance, symmetric_pair_distance, Derivatives, HPoint,
    LogScalar, PolarPoint,
};
use crate::leafgen::{E2Leaf, Leaf, LeafCurve};
use crate::quad::{integrate, QuadSettings};

pub const CSV_HEADER: &str = "n,theta,d_ambient,log_d_leaf,saturated";

#[derive(Clone, Debug, PartialEq)]
pub struct DistortionSample {
    /// Anchor index, for samples taken at anchors.
    pub n: Option<usize>,
    /// Angle (H²) or abscissa (E²) of the first point of the pair.
    pub theta: f64,
    pub d_ambient: f64,
    pub d_leaf: LogScalar,
    pub label: String,
}

/// Samples sorted by ambient distance. A lower bound for the distortion
/// function, never the function itself.
#[derive(Clone, Debug, PartialEq)]
pub struct DistortionProfile {
    pub samples: Vec<DistortionSample>,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SamplingPlan {
    /// Symmetric pairs through the given anchors.
    Anchors(Vec<usize>),
    /// Symmetric pairs at the given angles `θ ∈ (0, π/2]` (H²) or
    /// abscissas `x ≥ 0` (E²).
    Angles(Vec<f64>),
    /// All pairs from a grid of this many points along the leaf.
    Dense { points: usize },
}

impl SamplingPlan {
    /// Every anchor of the leaf; empty for the pure horocycle.
    pub fn all_anchors(leaf: &Leaf) -> SamplingPlan {
        let count = match leaf {
            Leaf::H2(l) => l.spikes().len(),
            Leaf::E2(l) => l.spikes().len(),
        };
        SamplingPlan::Anchors((0..count).collect())
    }

    fn describe(&self) -> String {
        match self {
            SamplingPlan::Anchors(ns) => format!("symmetric pairs at anchors {ns:?}"),
            SamplingPlan::Angles(ts) => format!("symmetric pairs at {} parameters", ts.len()),
            SamplingPlan::Dense { points } => format!("all pairs of a {points}-point grid"),
        }
    }

    fn is_empty(&self) -> bool {
        match self {
            SamplingPlan::Anchors(v) => v.is_empty(),
            SamplingPlan::Angles(v) => v.is_empty(),
            SamplingPlan::Dense { points } => *points < 2,
        }
    }
}

/// `e^a − e^b` for `a ≥ b`, in log form.
fn log_sub(a: LogScalar, b: LogScalar) -> LogScalar {
    if a.is_saturated() {
        return a;
    }
    let (hi, lo) = (a.log_value(), b.log_value());
    if lo == f64::NEG_INFINITY {
        return a;
    }
    if hi <= lo {
        return LogScalar::from_value(0.0);
    }
    LogScalar::from_log(hi + (-(lo - hi).exp_m1()).ln())
}

fn sort(mut samples: Vec<DistortionSample>) -> Vec<DistortionSample> {
    samples.sort_by(|a, b| a.d_ambient.total_cmp(&b.d_ambient));
    samples
}

/// Profile of a built leaf under `plan`.
pub fn distortion_profile(
    leaf: &Leaf,
    plan: &SamplingPlan,
) -> Result<DistortionProfile, AnalysisError> {
    if plan.is_empty() {
        return Err(AnalysisError::EmptyPlan);
    }
    let samples = match leaf {
        Leaf::H2(l) => h2_samples(l, plan)?,
        Leaf::E2(l) => e2_samples(l, plan)?,
    };
    let p = leaf.params();
    let provenance = format!(
        "{} leaf (delta {}, epsilon {}, n_max {}, oracle {}); {}",
        leaf.geometry().name(),
        p.delta,
        p.epsilon,
        p.n_max,
        leaf.oracle().map_or("none".to_string(), |o| o.to_string()),
        plan.describe()
    );
    Ok(DistortionProfile {
        samples: sort(samples),
        provenance,
    })
}

fn h2_symmetric(leaf: &LeafCurve, n: Option<usize>, theta: f64) -> Result<DistortionSample, AnalysisError> {
    if !(theta > 0.0 && theta <= FRAC_PI_2) {
        return Err(AnalysisError::PlanOutOfRange(format!(
            "angle {theta} is not in (0, pi/2]"
        )));
    }
    Ok(DistortionSample {
        n,
        theta,
        d_ambient: symmetric_pair_distance(theta)?,
        d_leaf: leaf.arc_length(theta, PI - theta)?,
        label: format!("symmetric pair at theta = {theta}"),
    })
}

fn h2_samples(leaf: &LeafCurve, plan: &SamplingPlan) -> Result<Vec<DistortionSample>, AnalysisError> {
    match plan {
        SamplingPlan::Anchors(ns) => ns
            .iter()
            .map(|&n| {
                let theta = leaf.anchor_theta(n).ok_or_else(|| {
                    AnalysisError::PlanOutOfRange(format!(
                        "anchor {n} requested, leaf has {}",
                        leaf.spikes().len()
                    ))
                })?;
                h2_symmetric(leaf, Some(n), theta)
            })
            .collect(),
        SamplingPlan::Angles(ts) => ts.iter().map(|&t| h2_symmetric(leaf, None, t)).collect(),
        SamplingPlan::Dense { points } => {
            let (lo, hi) = if leaf.is_pure_horocycle() {
                (leaf.params().delta, PI - leaf.params().delta)
            } else {
                (leaf.theta_min(), PI - leaf.theta_min())
            };
            let ts = grid(lo, hi, *points);
            let pts = ts
                .iter()
                .map(|&t| Ok(PolarPoint::new(t, leaf.eval(t)?)?))
                .collect::<Result<Vec<_>, AnalysisError>>()?;
            let mut cum = vec![LogScalar::from_value(0.0)];
            for w in ts.windows(2) {
                let next = cum.last().unwrap().add(leaf.arc_length(w[0], w[1])?);
                cum.push(next);
            }
            let mut out = Vec::new();
            for i in 0..ts.len() {
                for j in i + 1..ts.len() {
                    out.push(DistortionSample {
                        n: None,
                        theta: ts[i],
                        d_ambient: polar_distance(pts[i], pts[j])?,
                        d_leaf: log_sub(cum[j], cum[i]),
                        label: format!("pair theta = {}, {}", ts[i], ts[j]),
                    });
                }
            }
            Ok(out)
        }
    }
}

fn e2_point(leaf: &E2Leaf, x: f64) -> Result<EPoint, AnalysisError> {
    Ok(EPoint {
        x,
        y: leaf.height(x)?,
    })
}

fn e2_symmetric(leaf: &E2Leaf, n: Option<usize>, x: f64) -> Result<DistortionSample, AnalysisError> {
    if !(x >= 0.0) {
        return Err(AnalysisError::PlanOutOfRange(format!("abscissa {x} is negative")));
    }
    Ok(DistortionSample {
        n,
        theta: x,
        d_ambient: euc_distance(e2_point(leaf, -x)?, e2_point(leaf, x)?)?,
        d_leaf: leaf.arc_length(-x, x)?,
        label: format!("symmetric pair at x = +-{x}"),
    })
}

fn e2_samples(leaf: &E2Leaf, plan: &SamplingPlan) -> Result<Vec<DistortionSample>, AnalysisError> {
    match plan {
        SamplingPlan::Anchors(ns) => ns
            .iter()
            .map(|&n| {
                let x = leaf.anchor_x(n).ok_or_else(|| {
                    AnalysisError::PlanOutOfRange(format!(
                        "anchor {n} requested, leaf has {}",
                        leaf.spikes().len()
                    ))
                })?;
                e2_symmetric(leaf, Some(n), x)
            })
            .collect(),
        SamplingPlan::Angles(xs) => xs.iter().map(|&x| e2_symmetric(leaf, None, x)).collect(),
        SamplingPlan::Dense { points } => {
            let xm = leaf.x_max();
            let xs = grid(-xm, xm, *points);
            let pts = xs
                .iter()
                .map(|&x| e2_point(leaf, x))
                .collect::<Result<Vec<_>, _>>()?;
            let mut cum = vec![LogScalar::from_value(0.0)];
            for w in xs.windows(2) {
                let next = cum.last().unwrap().add(leaf.arc_length(w[0], w[1])?);
                cum.push(next);
            }
            let mut out = Vec::new();
            for i in 0..xs.len() {
                for j in i + 1..xs.len() {
                    out.push(DistortionSample {
                        n: None,
                        theta: xs[i],
                        d_ambient: euc_distance(pts[i], pts[j])?,
                        d_leaf: log_sub(cum[j], cum[i]),
                        label: format!("pair x = {}, {}", xs[i], xs[j]),
                    });
                }
            }
            Ok(out)
        }
    }
}

/// Profile of a parametrized half-plane curve from all pairs of a
/// `points`-point grid. Leaf distance is hyperbolic arc length along the
/// curve; on a closed curve the shorter way round.
pub fn generic_profile(span: CurveSpan<'_>, points: usize) -> Result<DistortionProfile, AnalysisError> {
    if points < 2 {
        return Err(AnalysisError::EmptyPlan);
    }
    let ss = grid(span.s0, span.s1, points);
    let method = if span.curve.jet(span.s0).is_some() {
        Derivatives::Analytic
    } else {
        Derivatives::Central { arc_step: 1e-5 }
    };
    let speed = |s: f64| -> f64 {
        match curve_jet(span.curve, s, method) {
            Ok(j) => j.d1[0].hypot(j.d1[1]) / j.point[1],
            Err(_) => f64::NAN,
        }
    };
    let mut cum = vec![0.0];
    for w in ss.windows(2) {
        let piece = integrate(speed, w[0], w[1], QuadSettings::default())?.value;
        cum.push(cum.last().unwrap() + piece);
    }
    let total = *cum.last().unwrap();
    let pts: Vec<HPoint> = ss
        .iter()
        .map(|&s| {
            let [x, y] = span.curve.point(s);
            HPoint::from_xy(x, y)
        })
        .collect();
    let last = if span.closed { ss.len() - 1 } else { ss.len() };
    let mut out = Vec::new();
    for i in 0..last {
        for j in i + 1..last {
            let along = cum[j] - cum[i];
            let d_leaf = if span.closed { along.min(total - along) } else { along };
            out.push(DistortionSample {
                n: None,
                theta: ss[i],
                d_ambient: hyp_distance(pts[i], pts[j])?,
                d_leaf: LogScalar::from_value(d_leaf),
                label: format!("pair s = {}, {}", ss[i], ss[j]),
            });
        }
    }
    Ok(DistortionProfile {
        samples: sort(out),
        provenance: format!("curve on [{}, {}]; all pairs of a {points}-point grid", span.s0, span.s1),
    })
}

/// The profile as CSV with columns [`CSV_HEADER`].
pub fn write_csv(profile: &DistortionProfile) -> String {
    let mut s = String::new();
    writeln!(s, "{CSV_HEADER}").unwrap();
    for x in &profile.samples {
        let n = x.n.map_or(String::new(), |n| n.to_string());
        let (log_d, sat) = if x.d_leaf.is_saturated() {
            ("inf".to_string(), 1)
        } else {
            (x.d_leaf.log_value().to_string(), 0)
        };
        writeln!(s, "{n},{},{},{log_d},{sat}", x.theta, x.d_ambient).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{GeodesicArc, HorizontalLine};
    use crate::growth::GrowthOracle;
    use crate::leafgen::{build_h2_leaf, ConstructionParams};
    use std::sync::OnceLock;

    fn tower() -> &'static Leaf {
        static L: OnceLock<Leaf> = OnceLock::new();
        L.get_or_init(|| {
            let mut p = ConstructionParams::default_h2();
            p.samples_per_segment = 512;
            Leaf::H2(build_h2_leaf(&p, &GrowthOracle::Tower).unwrap())
        })
    }

    #[test]
    fn horocycle_profile_obeys_sinh_law() {
        let leaf = Leaf::H2(LeafCurve::horocycle(0.1));
        let angles: Vec<f64> = [0.01, 0.3, 1.0, 4.0, 200.0].iter().map(|a| 1f64.atan2(*a)).collect();
        let prof = distortion_profile(&leaf, &SamplingPlan::Angles(angles)).unwrap();
        for s in &prof.samples {
            let l = s.d_leaf.log_value().exp();
            let law = 2.0 * (0.5 * s.d_ambient).sinh();
            assert!((l - law).abs() <= 1e-9 * (1.0 + l), "{l} {law}");
        }
    }

    #[test]
    fn first_spike_sample() {
        let prof = distortion_profile(tower(), &SamplingPlan::Anchors(vec![0])).unwrap();
        let s = &prof.samples[0];
        assert_eq!(s.n, Some(0));
        let t = 0.05f64;
        let expect = (1.0 + 2.0 * (t.cos() / t.sin()).powi(2)).acosh();
        assert!((s.d_ambient - expect).abs() < 1e-9);
        let Leaf::H2(l) = tower() else { unreachable!() };
        let rise = l.eval(t).unwrap() - l.eval(0.1).unwrap();
        assert!(s.d_leaf.log_value().exp() >= 2.0 * rise);
    }

    #[test]
    fn identical_endpoints_give_zero() {
        let prof = distortion_profile(tower(), &SamplingPlan::Angles(vec![FRAC_PI_2])).unwrap();
        assert_eq!(prof.samples[0].d_ambient, 0.0);
        assert_eq!(prof.samples[0].d_leaf.log_value(), f64::NEG_INFINITY);
    }

    #[test]
    fn plan_errors() {
        assert_eq!(
            distortion_profile(tower(), &SamplingPlan::Anchors(vec![])),
            Err(AnalysisError::EmptyPlan)
        );
        assert!(matches!(
            distortion_profile(tower(), &SamplingPlan::Anchors(vec![3])),
            Err(AnalysisError::PlanOutOfRange(_))
        ));
    }

    #[test]
    fn ambient_term_matches_actual_points() {
        let Leaf::H2(l) = tower() else { unreachable!() };
        let prof = distortion_profile(tower(), &SamplingPlan::all_anchors(tower())).unwrap();
        for s in &prof.samples {
            let p = PolarPoint::new(s.theta, l.eval(s.theta).unwrap()).unwrap();
            let q = PolarPoint::new(PI - s.theta, l.eval(PI - s.theta).unwrap()).unwrap();
            assert!((polar_distance(p, q).unwrap() - s.d_ambient).abs() < 1e-9);
        }
    }

    #[test]
    fn dense_profiles_dominate_ambient() {
        let prof = distortion_profile(tower(), &SamplingPlan::Dense { points: 40 }).unwrap();
        assert_eq!(prof.samples.len(), 40 * 39 / 2);
        for w in prof.samples.windows(2) {
            assert!(w[0].d_ambient <= w[1].d_ambient);
        }
        for s in &prof.samples {
            assert!(s.d_leaf.log_value().exp() >= s.d_ambient * (1.0 - 1e-9) - 1e-12);
        }
    }

    #[test]
    fn geodesic_is_undistorted() {
        let g = GeodesicArc { radius: 1.0 };
        let span = CurveSpan { curve: &g, s0: 0.2, s1: PI - 0.2, closed: false };
        let prof = generic_profile(span, 12).unwrap();
        for s in &prof.samples {
            let l = s.d_leaf.log_value().exp();
            assert!((l - s.d_ambient).abs() < 1e-8 * (1.0 + l));
        }
        let h = HorizontalLine { height: 1.0 };
        let span = CurveSpan { curve: &h, s0: -3.0, s1: 3.0, closed: false };
        let prof = generic_profile(span, 7).unwrap();
        let last = prof.samples.last().unwrap();
        assert!((last.d_leaf.log_value().exp() - 6.0).abs() < 1e-9);
    }

    #[test]
    fn csv_layout() {
        let prof = distortion_profile(tower(), &SamplingPlan::all_anchors(tower())).unwrap();
        let csv = write_csv(&prof);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,theta,d_ambient,log_d_leaf,saturated");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,0.05,"));
        assert!(lines[1].ends_with(",0"));
        let sat = DistortionProfile {
            samples: vec![DistortionSample {
                n: Some(5),
                theta: 0.1,
                d_ambient: 1.0,
                d_leaf: LogScalar::saturated(),
                label: String::new(),
            }],
            provenance: String::new(),
        };
        assert_eq!(write_csv(&sat).lines().nth(1), Some("5,0.1,1,inf,1"));
    }
}
