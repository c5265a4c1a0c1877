//! Named test curves in the upper half-plane, all with analytic jets.

use std::f64::consts::PI;

use crate::hgeom::{CurveJet, PlaneCurve};

/// The horocycle `y = height` based at ∞, traversed left to right
/// (positive side up). `s` is the `x` coordinate.
#[derive(Clone, Copy, Debug)]
pub struct HorizontalLine {
    pub height: f64,
}

impl PlaneCurve for HorizontalLine {
    fn point(&self, s: f64) -> [f64; 2] {
        [s, self.height]
    }

    fn jet(&self, s: f64) -> Option<CurveJet> {
        Some(CurveJet {
            point: self.point(s),
            d1: [1.0, 0.0],
            d2: [0.0, 0.0],
        })
    }
}

/// The geodesic `|z| = radius`, anticlockwise in the angle `s ∈ (0, π)`.
#[derive(Clone, Copy, Debug)]
pub struct GeodesicArc {
    pub radius: f64,
}

impl PlaneCurve for GeodesicArc {
    fn point(&self, s: f64) -> [f64; 2] {
        [self.radius * s.cos(), self.radius * s.sin()]
    }

    fn jet(&self, s: f64) -> Option<CurveJet> {
        let (sn, cs) = s.sin_cos();
        let r = self.radius;
        Some(CurveJet {
            point: [r * cs, r * sn],
            d1: [-r * sn, r * cs],
            d2: [-r * cs, -r * sn],
        })
    }
}

/// The Euclidean ray from the origin at `angle`, parametrized by radius.
#[derive(Clone, Copy, Debug)]
pub struct EuclideanRay {
    pub angle: f64,
}

impl PlaneCurve for EuclideanRay {
    fn point(&self, s: f64) -> [f64; 2] {
        [s * self.angle.cos(), s * self.angle.sin()]
    }

    fn jet(&self, s: f64) -> Option<CurveJet> {
        let (sn, cs) = self.angle.sin_cos();
        Some(CurveJet {
            point: [s * cs, s * sn],
            d1: [cs, sn],
            d2: [0.0, 0.0],
        })
    }
}

/// A Euclidean circle, anticlockwise in the angle `s`. Inside the
/// half-plane it is a hyperbolic circle; tangent to the axis it is a
/// horocycle. The positive side is the interior.
#[derive(Clone, Copy, Debug)]
pub struct EuclideanCircle {
    pub center: [f64; 2],
    pub radius: f64,
}

impl EuclideanCircle {
    /// The horocycle based at `basepoint` with the given diameter.
    pub fn horocycle(basepoint: f64, diameter: f64) -> Self {
        EuclideanCircle {
            center: [basepoint, 0.5 * diameter],
            radius: 0.5 * diameter,
        }
    }

    /// Hyperbolic radius, when the circle lies strictly inside H².
    pub fn hyperbolic_radius(&self) -> Option<f64> {
        let (c, r) = (self.center[1], self.radius);
        (c > r).then(|| 0.5 * ((c + r) / (c - r)).ln())
    }
}

impl PlaneCurve for EuclideanCircle {
    fn point(&self, s: f64) -> [f64; 2] {
        let (sn, cs) = s.sin_cos();
        [
            self.center[0] + self.radius * cs,
            self.center[1] + self.radius * sn,
        ]
    }

    fn jet(&self, s: f64) -> Option<CurveJet> {
        let (sn, cs) = s.sin_cos();
        let r = self.radius;
        Some(CurveJet {
            point: self.point(s),
            d1: [-r * sn, r * cs],
            d2: [-r * cs, -r * sn],
        })
    }
}

/// Lemniscate of Gerono `(cx + a cos s, cy + a sin s cos s)`, a
/// figure-eight crossing itself at the centre for `s = π/2, 3π/2`.
#[derive(Clone, Copy, Debug)]
pub struct FigureEight {
    pub center: [f64; 2],
    pub scale: f64,
}

impl FigureEight {
    pub const CROSSING_PARAMS: (f64, f64) = (PI / 2.0, 3.0 * PI / 2.0);
}

impl PlaneCurve for FigureEight {
    fn point(&self, s: f64) -> [f64; 2] {
        let a = self.scale;
        [
            self.center[0] + a * s.cos(),
            self.center[1] + a * s.sin() * s.cos(),
        ]
    }

    fn jet(&self, s: f64) -> Option<CurveJet> {
        let a = self.scale;
        let (s2, c2) = (2.0 * s).sin_cos();
        Some(CurveJet {
            point: self.point(s),
            d1: [-a * s.sin(), a * c2],
            d2: [-a * s.cos(), -2.0 * a * s2],
        })
    }
}

/// A limaçon `r = inner + outer·cos s` about `center` with
/// `outer > inner`: the curve winds inward through a small loop and
/// crosses itself at the centre where `r = 0`.
#[derive(Clone, Copy, Debug)]
pub struct LoopedSpiral {
    pub center: [f64; 2],
    pub inner: f64,
    pub outer: f64,
}

impl LoopedSpiral {
    /// The two parameters that meet at the centre.
    pub fn crossing_params(&self) -> (f64, f64) {
        let s = (-self.inner / self.outer).acos();
        (s, 2.0 * PI - s)
    }
}

impl PlaneCurve for LoopedSpiral {
    fn point(&self, s: f64) -> [f64; 2] {
        let r = self.inner + self.outer * s.cos();
        [self.center[0] + r * s.cos(), self.center[1] + r * s.sin()]
    }

    fn jet(&self, s: f64) -> Option<CurveJet> {
        let (sn, cs) = s.sin_cos();
        let r = self.inner + self.outer * cs;
        let dr = -self.outer * sn;
        let ddr = -self.outer * cs;
        Some(CurveJet {
            point: self.point(s),
            d1: [dr * cs - r * sn, dr * sn + r * cs],
            d2: [
                ddr * cs - 2.0 * dr * sn - r * cs,
                ddr * sn + 2.0 * dr * cs - r * sn,
            ],
        })
    }
}
