//! Curvature extrema over a whole leaf or test curve.

use std::f64::consts::PI;

use super::{AnalysisError, CurveSpan};
use crate::hgeom::{hyp_curvature, Derivatives};
use crate::leafgen::{E2Leaf, Leaf, LeafCurve};
use crate::scan::{scan_interval, Extrema};

#[derive(Clone, Copy, Debug)]
pub enum ScanTarget<'a> {
    /// Geodesic curvature of an H² leaf.
    H2(&'a LeafCurve),
    /// Euclidean curvature of an E² leaf.
    E2(&'a E2Leaf),
    /// Geodesic curvature of a half-plane curve.
    Curve(CurveSpan<'a>),
}

impl<'a> From<&'a Leaf> for ScanTarget<'a> {
    fn from(leaf: &'a Leaf) -> Self {
        match leaf {
            Leaf::H2(l) => ScanTarget::H2(l),
            Leaf::E2(l) => ScanTarget::E2(l),
        }
    }
}

fn segments(lo: f64, hi: f64, cuts: Vec<f64>) -> Vec<(f64, f64)> {
    let mut knots = vec![lo];
    knots.extend(cuts.into_iter().filter(|&c| c > lo && c < hi));
    knots.push(hi);
    knots.windows(2).map(|w| (w[0], w[1])).collect()
}

fn scan_pieces<F: Fn(f64) -> Result<f64, AnalysisError>>(
    f: F,
    pieces: &[(f64, f64)],
    samples: usize,
) -> Result<Extrema, AnalysisError> {
    let checked = |t: f64| {
        let k = f(t)?;
        if k.is_finite() {
            Ok(k)
        } else {
            Err(AnalysisError::Evaluation { at: t, reason: format!("curvature {k}") })
        }
    };
    let mut out: Option<Extrema> = None;
    for &(a, b) in pieces {
        let e = scan_interval(checked, a, b, samples)?;
        out = Some(match out {
            Some(o) => o.merge(e),
            None => e,
        });
    }
    out.ok_or(AnalysisError::EmptyPlan)
}

/// Minimum and maximum curvature, scanning each smooth piece with
/// `samples` points plus local refinement. The pure horocycle is scanned
/// on `[δ, π − δ]`.
pub fn curvature_scan(target: ScanTarget<'_>, samples: usize) -> Result<Extrema, AnalysisError> {
    let eval_err = |at: f64, e: &dyn std::fmt::Display| AnalysisError::Evaluation {
        at,
        reason: e.to_string(),
    };
    match target {
        ScanTarget::H2(l) => {
            let m = if l.is_pure_horocycle() { l.params().delta } else { l.theta_min() };
            let pieces = segments(m, PI - m, l.breakpoints());
            scan_pieces(|t| l.curvature(t).map_err(|e| eval_err(t, &e)), &pieces, samples)
        }
        ScanTarget::E2(l) => {
            let pieces = segments(-l.x_max(), l.x_max(), l.breakpoints());
            scan_pieces(|x| l.curvature(x).map_err(|e| eval_err(x, &e)), &pieces, samples)
        }
        ScanTarget::Curve(span) => {
            let method = if span.curve.jet(span.s0).is_some() {
                Derivatives::Analytic
            } else {
                Derivatives::Central { arc_step: 1e-4 }
            };
            let f = |s: f64| hyp_curvature(span.curve, s, method).map_err(|e| eval_err(s, &e));
            scan_pieces(f, &[(span.s0, span.s1)], samples)
        }
    }
}
