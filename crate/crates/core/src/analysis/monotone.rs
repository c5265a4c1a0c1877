//! Motion of the osculating-horocycle basepoint along a curve with
//! curvature at least 1. The basepoint should only move anticlockwise,
//! and strictly so where the curvature exceeds 1.

use std::f64::consts::PI;

use super::{grid, AnalysisError, CurveSpan};
use crate::hgeom::{
    boundary_angle, curve_jet, euclidean_curvature_and_normal, osculating_horocycle, Derivatives,
    HPoint, UnitVector,
};

const KAPPA_FLOOR_TOL: f64 = 1e-6;
const BACKWARD_TOL: f64 = 1e-12;
const STRICT_KAPPA: f64 = 1.0 + 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum MonotonicityVerdict {
    /// Never moves clockwise. `strict` when it moves forward at every step.
    MonotoneAnticlockwise { strict: bool },
    /// The basepoint failed to advance between samples `index` and
    /// `index + 1`.
    Violation { index: usize, s: f64, step: f64 },
    Inapplicable { reason: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityReport {
    pub verdict: MonotonicityVerdict,
    /// Net boundary angle travelled, in turns.
    pub winding: f64,
    pub min_kappa: f64,
    pub samples: usize,
}

fn wrap(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a <= -PI {
        a += 2.0 * PI;
    } else if a > PI {
        a -= 2.0 * PI;
    }
    a
}

struct Track {
    params: Vec<f64>,
    angles: Vec<f64>,
    kappas: Vec<f64>,
}

/// Boundary angles of the osculating basepoint at `samples` parameters
/// over the span, with the curvature at each.
fn basepoint_angles(span: CurveSpan<'_>, samples: usize, method: Derivatives) -> Result<Track, AnalysisError> {
    let ss = grid(span.s0, span.s1, samples);
    let mut angles = Vec::with_capacity(ss.len());
    let mut kappas = Vec::with_capacity(ss.len());
    for &s in &ss {
        let jet = curve_jet(span.curve, s, method).map_err(|e| AnalysisError::Evaluation {
            at: s,
            reason: e.to_string(),
        })?;
        let (k_euc, n) = euclidean_curvature_and_normal(&jet);
        let y = jet.point[1];
        if !(y > 0.0) {
            return Err(AnalysisError::Evaluation {
                at: s,
                reason: format!("point leaves the half-plane (y = {y})"),
            });
        }
        kappas.push(y * k_euc + n[1]);
        let normal = UnitVector::normalized(n[0], n[1])?;
        let h = osculating_horocycle(HPoint::from_xy(jet.point[0], y), normal);
        angles.push(boundary_angle(h.basepoint));
    }
    Ok(Track { params: ss, angles, kappas })
}

/// Samples the basepoint at `samples` parameters (ends included) and
/// checks it never steps clockwise.
pub fn basepoint_monotonicity(
    span: CurveSpan<'_>,
    samples: usize,
    method: Derivatives,
) -> Result<MonotonicityReport, AnalysisError> {
    if samples < 2 {
        return Err(AnalysisError::EmptyPlan);
    }
    let Track { params: ss, angles, kappas } = basepoint_angles(span, samples, method)?;
    let min_kappa = kappas.iter().copied().fold(f64::INFINITY, f64::min);
    let steps: Vec<f64> = angles.windows(2).map(|w| wrap(w[1] - w[0])).collect();
    let winding = steps.iter().sum::<f64>() / (2.0 * PI);
    let mut report = MonotonicityReport {
        verdict: MonotonicityVerdict::MonotoneAnticlockwise { strict: true },
        winding,
        min_kappa,
        samples: ss.len(),
    };
    if min_kappa < 1.0 - KAPPA_FLOOR_TOL {
        report.verdict = MonotonicityVerdict::Inapplicable {
            reason: format!("κ falls below 1 (min {min_kappa})"),
        };
        return Ok(report);
    }
    let mut strict = true;
    for (i, &d) in steps.iter().enumerate() {
        let forced = kappas[i] > STRICT_KAPPA && kappas[i + 1] > STRICT_KAPPA;
        if d < -BACKWARD_TOL || (forced && d <= 0.0) {
            report.verdict = MonotonicityVerdict::Violation {
                index: i,
                s: ss[i],
                step: d,
            };
            return Ok(report);
        }
        if d <= 0.0 {
            strict = false;
        }
    }
    report.verdict = MonotonicityVerdict::MonotoneAnticlockwise { strict };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{EuclideanCircle, GeodesicArc, HorizontalLine};
    use crate::hgeom::PlaneCurve;

    fn span(c: &dyn PlaneCurve, s0: f64, s1: f64, closed: bool) -> CurveSpan<'_> {
        CurveSpan { curve: c, s0, s1, closed }
    }

    #[test]
    fn horocycle_basepoint_is_fixed() {
        let h = HorizontalLine { height: 1.0 };
        let r = basepoint_monotonicity(span(&h, -5.0, 5.0, false), 101, Derivatives::Analytic).unwrap();
        assert_eq!(r.verdict, MonotonicityVerdict::MonotoneAnticlockwise { strict: false });
        assert_eq!(r.winding, 0.0);
    }

    #[test]
    fn circle_winds_once() {
        let c = EuclideanCircle { center: [0.0, 2.0], radius: 1.0 };
        let r = basepoint_monotonicity(span(&c, 0.0, 2.0 * PI, true), 400, Derivatives::Analytic).unwrap();
        assert_eq!(r.verdict, MonotonicityVerdict::MonotoneAnticlockwise { strict: true });
        assert!((r.winding - 1.0).abs() < 1e-9, "{}", r.winding);
        // coth of the hyperbolic radius
        let k = 1.0 / c.hyperbolic_radius().unwrap().tanh();
        assert!((r.min_kappa - k).abs() < 1e-9);
    }

    #[test]
    fn circle_agrees_with_differences() {
        let c = EuclideanCircle { center: [0.5, 3.0], radius: 2.0 };
        let r = basepoint_monotonicity(span(&c, 0.0, 2.0 * PI, true), 300, Derivatives::Central { arc_step: 1e-4 })
            .unwrap();
        assert_eq!(r.verdict, MonotonicityVerdict::MonotoneAnticlockwise { strict: true });
    }

    #[test]
    fn reversed_circle_is_inapplicable() {
        struct Rev(EuclideanCircle);
        impl PlaneCurve for Rev {
            fn point(&self, s: f64) -> [f64; 2] {
                self.0.point(-s)
            }
        }
        let c = Rev(EuclideanCircle { center: [0.0, 2.0], radius: 1.0 });
        let r = basepoint_monotonicity(span(&c, 0.0, 2.0 * PI, true), 100, Derivatives::Central { arc_step: 1e-4 })
            .unwrap();
        assert!(matches!(r.verdict, MonotonicityVerdict::Inapplicable { .. }));
    }

    #[test]
    fn geodesic_is_inapplicable() {
        let g = GeodesicArc { radius: 1.0 };
        let r = basepoint_monotonicity(span(&g, 0.2, 2.9, false), 50, Derivatives::Analytic).unwrap();
        assert!(matches!(r.verdict, MonotonicityVerdict::Inapplicable { .. }));
    }

    #[test]
    fn wrap_range() {
        assert_eq!(wrap(PI), PI);
        assert_eq!(wrap(-PI), PI);
        assert!((wrap(1.5 * PI) + 0.5 * PI).abs() < 1e-15);
    }
}
