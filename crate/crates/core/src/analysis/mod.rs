//! Measurements on leaves and test curves: distortion profiles, the
//! exponential comparison, osculating-basepoint motion, self-intersection
//! and curvature extrema.

mod curvature;
mod distortion;
mod expbound;
mod intersect;
mod monotone;

pub use curvature::{curvature_scan, ScanTarget};
pub use distortion::{
    distortion_profile, generic_profile, write_csv, DistortionProfile, DistortionSample,
    SamplingPlan, CSV_HEADER,
};
pub use expbound::{
    exponential_bound_check, horocycle_distortion_law, ExpBoundReport, ExpBoundVerdict,
    EXP_BOUND_SLACK,
};
pub use intersect::{
    leaf_polyline, leaf_self_intersection, self_intersection, self_intersection_polyline,
    IntersectionReport, CROSSING_RESIDUAL,
};
pub use monotone::{basepoint_monotonicity, MonotonicityReport, MonotonicityVerdict};

use crate::hgeom::{GeomError, PlaneCurve};
use crate::leafgen::LeafError;
use crate::quad::QuadError;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Leaf(#[from] LeafError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("sampling plan is empty")]
    EmptyPlan,
    #[error("sampling plan exceeds the leaf: {0}")]
    PlanOutOfRange(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(
        "sampling too sparse: spacing {spacing} after sample {index} exceeds {limit} \
         (10 x tolerance)"
    )]
    InsufficientDensity { index: usize, spacing: f64, limit: f64 },
    #[error("polyline crossing near s = {s}, s' = {t} did not refine to a curve crossing (residual {residual})")]
    UnverifiedCrossing { s: f64, t: f64, residual: f64 },
    #[error("curvature evaluation failed at parameter {at}: {reason}")]
    Evaluation { at: f64, reason: String },
}

/// A parametrized test curve in the half-plane with its parameter range.
#[derive(Clone, Copy)]
pub struct CurveSpan<'a> {
    pub curve: &'a dyn PlaneCurve,
    pub s0: f64,
    pub s1: f64,
    /// The curve closes up: `curve(s0) = curve(s1)`.
    pub closed: bool,
}

impl std::fmt::Debug for CurveSpan<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CurveSpan")
            .field("s0", &self.s0)
            .field("s1", &self.s1)
            .field("closed", &self.closed)
            .finish()
    }
}

/// `n` equally spaced parameters on `[s0, s1]`, both ends included.
pub(crate) fn grid(s0: f64, s1: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| {
            if i + 1 == n {
                s1
            } else {
                s0 + (s1 - s0) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}
