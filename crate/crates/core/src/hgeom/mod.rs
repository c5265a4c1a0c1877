//! Geometry kernel for the upper half-plane model of H².
//!
//! Points keep their height as a log so that leaves whose radii reach
//! `e^600` and beyond can still be measured. Distances go through a
//! log-domain form of `arccosh(1 + u)` and never square a raw coordinate.

mod curve;
mod logscalar;

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

pub use curve::{
    curve_jet, euclidean_curvature_and_normal, CurveJet, DerivativeError, Derivatives, PlaneCurve,
};
pub(crate) use curve::smooth_second_diff;
pub use logscalar::LogScalar;

/// Tolerance for treating an osculating normal as vertical.
pub const VERTICAL_NORMAL_TOL: f64 = 1e-9;
/// Tolerance on the length of a [`UnitVector`].
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub enum GeomError {
    #[error("saturated or non-finite input; distance is not representable")]
    Saturated,
    #[error("angle {0} outside the admissible range")]
    AngleOutOfRange(f64),
    #[error("vector ({0}, {1}) is not unit length")]
    NotUnit(f64, f64),
    #[error(transparent)]
    Derivative(#[from] DerivativeError),
}

/// A point `x + i·exp(log_y)` of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HPoint {
    pub x: f64,
    pub log_y: f64,
}

impl HPoint {
    pub fn new(x: f64, log_y: f64) -> Self {
        HPoint { x, log_y }
    }

    pub fn from_xy(x: f64, y: f64) -> Self {
        debug_assert!(y > 0.0);
        HPoint { x, log_y: y.ln() }
    }

    pub fn y(&self) -> f64 {
        self.log_y.exp()
    }

    fn is_usable(&self) -> bool {
        self.x.is_finite() && self.log_y.is_finite() && self.log_y < LogScalar::SATURATED_LOG
    }

    /// Polar form about the origin.
    pub fn to_polar(&self) -> PolarPoint {
        // atan2(y, x) with both arguments divided by y.
        let theta = 1f64.atan2(self.x * (-self.log_y).exp());
        PolarPoint {
            theta,
            log_r: self.log_y - theta.sin().ln(),
        }
    }
}

/// A point `exp(log_r)·e^{iθ}` with `0 < θ < π`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarPoint {
    pub theta: f64,
    pub log_r: f64,
}

impl PolarPoint {
    pub fn new(theta: f64, log_r: f64) -> Result<Self, GeomError> {
        if !(theta > 0.0 && theta < PI) {
            return Err(GeomError::AngleOutOfRange(theta));
        }
        Ok(PolarPoint { theta, log_r })
    }

    /// Cartesian form; the height is formed in log space, only `x` needs
    /// the radius itself.
    pub fn to_hpoint(&self) -> Result<HPoint, GeomError> {
        if self.log_r > LogScalar::EXP_LIMIT || !self.log_r.is_finite() {
            return Err(GeomError::Saturated);
        }
        Ok(HPoint {
            x: self.log_r.exp() * self.theta.cos(),
            log_y: self.log_r + self.theta.sin().ln(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitVector {
    ux: f64,
    uy: f64,
}

impl UnitVector {
    pub fn new(ux: f64, uy: f64) -> Result<Self, GeomError> {
        if ((ux * ux + uy * uy) - 1.0).abs() > UNIT_TOL {
            return Err(GeomError::NotUnit(ux, uy));
        }
        Ok(UnitVector { ux, uy })
    }

    pub fn normalized(ux: f64, uy: f64) -> Result<Self, GeomError> {
        let len = ux.hypot(uy);
        if !(len > 0.0 && len.is_finite()) {
            return Err(GeomError::NotUnit(ux, uy));
        }
        Ok(UnitVector {
            ux: ux / len,
            uy: uy / len,
        })
    }

    pub fn ux(&self) -> f64 {
        self.ux
    }

    pub fn uy(&self) -> f64 {
        self.uy
    }
}

/// A point of the circle at infinity `R ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Boundary {
    Finite(f64),
    Infinity,
}

/// A horocycle: a Euclidean circle tangent to the real axis, or a
/// horizontal line when based at infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Horocycle {
    pub basepoint: Boundary,
    /// Log of the Euclidean diameter (finite basepoint) or of the height
    /// (basepoint at infinity).
    pub log_scale: f64,
}

impl Horocycle {
    /// Euclidean centre and radius for a finite basepoint.
    pub fn circle(&self) -> Option<([f64; 2], f64)> {
        match self.basepoint {
            Boundary::Finite(b) => {
                let radius = 0.5 * self.log_scale.exp();
                Some(([b, radius], radius))
            }
            Boundary::Infinity => None,
        }
    }
}

/// `ln(sinh(a))` for `a >= 0`, stable for large `a`.
fn ln_sinh(a: f64) -> f64 {
    if a < 20.0 {
        a.sinh().ln()
    } else {
        a - LN_2 + (-(-2.0 * a).exp()).ln_1p()
    }
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `arccosh(1 + u)` given `ln u`.
pub fn acosh_1p_from_log(ln_u: f64) -> f64 {
    if ln_u == f64::NEG_INFINITY {
        return 0.0;
    }
    if ln_u < 20.0 {
        let u = ln_u.exp();
        (u + (u * (u + 2.0)).sqrt()).ln_1p()
    } else {
        let inv = (-ln_u).exp();
        ln_u + (1.0 + inv + (1.0 + 2.0 * inv).sqrt()).ln()
    }
}

/// Hyperbolic distance in the upper half-plane,
/// `arccosh(1 + (Δx² + Δy²) / (2 y_p y_q))`, evaluated in log space.
pub fn hyp_distance(p: HPoint, q: HPoint) -> Result<f64, GeomError> {
    if !(p.is_usable() && q.is_usable()) {
        return Err(GeomError::Saturated);
    }
    let dx = (p.x - q.x).abs();
    let horizontal = if dx == 0.0 {
        f64::NEG_INFINITY
    } else {
        2.0 * dx.ln() - LN_2 - p.log_y - q.log_y
    };
    // (y_p - y_q)² / (2 y_p y_q) = cosh(Δ) − 1 = 2 sinh²(Δ/2), Δ = ln(y_p/y_q)
    let dlog = (p.log_y - q.log_y).abs();
    let vertical = if dlog == 0.0 {
        f64::NEG_INFINITY
    } else {
        LN_2 + 2.0 * ln_sinh(0.5 * dlog)
    };
    Ok(acosh_1p_from_log(log_add_exp(horizontal, vertical)))
}

/// Hyperbolic distance between polar points. Depends on the radii only
/// through `Δ log r`, so it works at any scale.
pub fn polar_distance(p: PolarPoint, q: PolarPoint) -> Result<f64, GeomError> {
    if !(p.log_r.is_finite() && q.log_r.is_finite()) {
        return Err(GeomError::Saturated);
    }
    // u = (cosh Δρ − cos Δθ) / (sin θp sin θq)
    //   = 2 (sinh²(Δρ/2) + sin²(Δθ/2)) / (sin θp sin θq)
    let drho = (p.log_r - q.log_r).abs();
    let radial = if drho == 0.0 {
        f64::NEG_INFINITY
    } else {
        2.0 * ln_sinh(0.5 * drho)
    };
    let half_dtheta = (0.5 * (p.theta - q.theta)).sin().abs();
    let angular = if half_dtheta == 0.0 {
        f64::NEG_INFINITY
    } else {
        2.0 * half_dtheta.ln()
    };
    let ln_u = LN_2 + log_add_exp(radial, angular) - p.theta.sin().ln() - q.theta.sin().ln();
    Ok(acosh_1p_from_log(ln_u))
}

/// Distance between `(r, θ)` and `(r, π − θ)`: `arccosh(1 + 2 cot² θ)`,
/// the same for every `r`.
pub fn symmetric_pair_distance(theta: f64) -> Result<f64, GeomError> {
    if !(theta > 0.0 && theta <= FRAC_PI_2) {
        return Err(GeomError::AngleOutOfRange(theta));
    }
    if theta == FRAC_PI_2 {
        return Ok(0.0);
    }
    let cot = theta.cos() / theta.sin();
    Ok(acosh_1p_from_log(LN_2 + 2.0 * cot.ln()))
}

/// Signed geodesic curvature `κ = y·κ_euc + n_y` of a half-plane curve,
/// positive toward the left of travel. The horizontal line `y = 1`
/// traversed left to right has `κ = 1`.
pub fn hyp_curvature<C: PlaneCurve + ?Sized>(
    curve: &C,
    s: f64,
    method: Derivatives,
) -> Result<f64, GeomError> {
    let jet = curve_jet(curve, s, method)?;
    let (kappa_euc, normal) = euclidean_curvature_and_normal(&jet);
    Ok(jet.point[1] * kappa_euc + normal[1])
}

/// The horocycle tangent at `p` on the side `normal` points to.
pub fn osculating_horocycle(p: HPoint, normal: UnitVector) -> Horocycle {
    let ny = normal.uy();
    if (1.0 - ny).abs() <= VERTICAL_NORMAL_TOL {
        return Horocycle {
            basepoint: Boundary::Infinity,
            log_scale: p.log_y,
        };
    }
    // Centre p + R·n touches the axis when y + R·n_y = R.
    let log_radius = p.log_y - (1.0 - ny).ln();
    Horocycle {
        basepoint: Boundary::Finite(p.x + log_radius.exp() * normal.ux()),
        log_scale: LN_2 + log_radius,
    }
}

/// Angle in `(−π, π]` of the boundary point under the Cayley map
/// `z ↦ (z − i)/(z + i)`. Increases (anticlockwise) as `b` runs from
/// `−∞` through `0` to `+∞`, wrapping once at `b = 0`.
pub fn boundary_angle(b: Boundary) -> f64 {
    match b {
        Boundary::Infinity => 0.0,
        Boundary::Finite(b) => {
            // arg((b − i)/(b + i)) = 2·arg(b − i) = −2·atan2(1, b) ∈ (−2π, 0)
            let a = -2.0 * 1f64.atan2(b);
            if a <= -PI {
                a + 2.0 * PI
            } else {
                a
            }
        }
    }
}

/// Image under the dilation `z ↦ t·z`, an isometry of H².
pub trait Dilate: Sized {
    fn dilate(&self, log_t: f64) -> Self;
}

impl Dilate for HPoint {
    fn dilate(&self, log_t: f64) -> Self {
        HPoint {
            x: self.x * log_t.exp(),
            log_y: self.log_y + log_t,
        }
    }
}

impl Dilate for PolarPoint {
    fn dilate(&self, log_t: f64) -> Self {
        PolarPoint {
            theta: self.theta,
            log_r: self.log_r + log_t,
        }
    }
}

pub fn dilate<P: Dilate>(p: &P, log_t: f64) -> P {
    p.dilate(log_t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{EuclideanRay, GeodesicArc, HorizontalLine};
    use proptest::prelude::*;

    /// Length of the Euclidean segment p→q in the hyperbolic metric, by
    /// composite Simpson. Not the geodesic, so an upper bound on distance;
    /// equal to it for vertical segments.
    fn simpson_segment_length(p: [f64; 2], q: [f64; 2], n: usize) -> f64 {
        let len = (q[0] - p[0]).hypot(q[1] - p[1]);
        let f = |t: f64| 1.0 / (p[1] + t * (q[1] - p[1]));
        let h = 1.0 / n as f64;
        let mut acc = f(0.0) + f(1.0);
        for i in 1..n {
            acc += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        len * acc * h / 3.0
    }

    /// Geodesic length of the semicircle through (−1, 1), (1, 1): centre 0,
    /// radius √2, angles π/4 .. 3π/4, integrand R dφ / (R sin φ).
    fn geodesic_quadrature_length() -> f64 {
        let (a, b) = (PI / 4.0, 3.0 * PI / 4.0);
        let n = 2000;
        let h = (b - a) / n as f64;
        let f = |phi: f64| 1.0 / phi.sin();
        let mut acc = f(a) + f(b);
        for i in 1..n {
            acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    }

    #[test]
    fn unit_vertical_distance() {
        let d = hyp_distance(HPoint::new(0.0, 0.0), HPoint::new(0.0, 1.0)).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
        let quad = simpson_segment_length([0.0, 1.0], [0.0, 1f64.exp()], 2000);
        assert!((quad - 1.0).abs() < 1e-10);
    }

    #[test]
    fn horizontal_pair_matches_geodesic_integral() {
        let d = hyp_distance(HPoint::new(-1.0, 0.0), HPoint::new(1.0, 0.0)).unwrap();
        let expected = 3f64.acosh();
        assert!((d - expected).abs() < 1e-14);
        assert!((d - 1.762747174039086).abs() < 1e-12);
        assert!((geodesic_quadrature_length() - d).abs() < 1e-9);
    }

    #[test]
    fn identical_points_have_zero_distance() {
        let p = HPoint::new(3.5, -2.0);
        assert_eq!(hyp_distance(p, p).unwrap(), 0.0);
    }

    #[test]
    fn saturated_input_is_flagged() {
        let p = HPoint::new(0.0, f64::INFINITY);
        assert_eq!(
            hyp_distance(p, HPoint::new(0.0, 0.0)),
            Err(GeomError::Saturated)
        );
        let s = HPoint::new(0.0, LogScalar::saturated().log_value());
        assert_eq!(
            hyp_distance(s, HPoint::new(0.0, 0.0)),
            Err(GeomError::Saturated)
        );
    }

    #[test]
    fn symmetric_pair_examples() {
        assert!(symmetric_pair_distance(FRAC_PI_2).unwrap().abs() < 1e-15);
        let quarter = symmetric_pair_distance(PI / 4.0).unwrap();
        assert!((quarter - 3f64.acosh()).abs() < 1e-14);
        for log_r in [0.0, 1e6f64.ln()] {
            let p = PolarPoint::new(PI / 4.0, log_r).unwrap().to_hpoint().unwrap();
            let q = PolarPoint::new(3.0 * PI / 4.0, log_r).unwrap().to_hpoint().unwrap();
            assert!((hyp_distance(p, q).unwrap() - quarter).abs() < 1e-9);
        }
        let theta = 0.1 / 32.0;
        let d = symmetric_pair_distance(theta).unwrap();
        let cot = 1.0 / theta.tan();
        assert!((d - (1.0 + 2.0 * cot * cot).acosh()).abs() < 1e-12);
        assert!((d - 12.92).abs() < 5e-3);
        for log_r in [0.0, 50.0] {
            let p = PolarPoint::new(theta, log_r).unwrap().to_hpoint().unwrap();
            let q = PolarPoint::new(PI - theta, log_r).unwrap().to_hpoint().unwrap();
            assert!((hyp_distance(p, q).unwrap() - d).abs() < 1e-9);
        }
    }

    #[test]
    fn symmetric_pair_rejects_bad_angles() {
        assert!(symmetric_pair_distance(0.0).is_err());
        assert!(symmetric_pair_distance(2.0).is_err());
        assert!(symmetric_pair_distance(-0.1).is_err());
    }

    #[test]
    fn r_independence_through_cartesian_route() {
        for n in 0..=5 {
            let theta = 0.1 / f64::powi(2.0, n);
            let expected = symmetric_pair_distance(theta).unwrap();
            for log_r in [0.0, 10.0, 100.0, 600.0] {
                let p = PolarPoint::new(theta, log_r).unwrap().to_hpoint().unwrap();
                let q = PolarPoint::new(PI - theta, log_r).unwrap().to_hpoint().unwrap();
                let d = hyp_distance(p, q).unwrap();
                assert!((d - expected).abs() < 1e-9, "n={n} log_r={log_r}: {d} vs {expected}");
            }
        }
    }

    #[test]
    fn polar_distance_agrees_with_cartesian() {
        let p = PolarPoint::new(0.3, 1.2).unwrap();
        let q = PolarPoint::new(2.0, -0.4).unwrap();
        let a = polar_distance(p, q).unwrap();
        let b = hyp_distance(p.to_hpoint().unwrap(), q.to_hpoint().unwrap()).unwrap();
        assert!((a - b).abs() < 1e-12);
        // huge radii stay fine in polar form
        let far = polar_distance(
            PolarPoint::new(0.01, 65536.0).unwrap(),
            PolarPoint::new(PI - 0.01, 65536.0).unwrap(),
        )
        .unwrap();
        assert!((far - symmetric_pair_distance(0.01).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn curvature_triple_analytic_and_central() {
        let h = Derivatives::Central { arc_step: 1e-4 };
        let line = HorizontalLine { height: 1.0 };
        let geo = GeodesicArc { radius: 2.5 };
        for s in [-3.0, -0.5, 0.0, 1.0, 4.0] {
            assert!((hyp_curvature(&line, s, Derivatives::Analytic).unwrap() - 1.0).abs() < 1e-15);
            assert!((hyp_curvature(&line, s, h).unwrap() - 1.0).abs() < 1e-6);
        }
        for s in [0.3, 1.0, 1.5, 2.8] {
            assert!(hyp_curvature(&geo, s, Derivatives::Analytic).unwrap().abs() < 1e-14);
            assert!(hyp_curvature(&geo, s, h).unwrap().abs() < 1e-6);
        }
        for theta0 in [0.05, 0.3, 1.0, 1.4] {
            let ray = EuclideanRay { angle: theta0 };
            for s in [0.5, 1.0, 7.0] {
                let k = hyp_curvature(&ray, s, h).unwrap();
                assert!((k - theta0.cos()).abs() < 1e-6, "ray {theta0} at {s}: {k}");
            }
        }
    }

    #[test]
    fn osculating_examples() {
        let up = osculating_horocycle(HPoint::new(0.0, 0.0), UnitVector::new(0.0, 1.0).unwrap());
        assert_eq!(up.basepoint, Boundary::Infinity);
        assert_eq!(up.log_scale, 0.0);

        let right = osculating_horocycle(HPoint::new(0.0, 0.0), UnitVector::new(1.0, 0.0).unwrap());
        let (centre, radius) = right.circle().unwrap();
        assert!((radius - 1.0).abs() < 1e-15);
        assert!((centre[0] - 1.0).abs() < 1e-15 && (centre[1] - 1.0).abs() < 1e-15);
        assert_eq!(right.basepoint, Boundary::Finite(1.0));

        let down = osculating_horocycle(
            HPoint::from_xy(0.0, 2.0),
            UnitVector::new(0.0, -1.0).unwrap(),
        );
        let (centre, radius) = down.circle().unwrap();
        assert!((radius - 1.0).abs() < 1e-15);
        assert!(centre[0].abs() < 1e-15 && (centre[1] - 1.0).abs() < 1e-15);
        assert_eq!(down.basepoint, Boundary::Finite(0.0));
    }

    #[test]
    fn boundary_angle_examples() {
        assert!((boundary_angle(Boundary::Finite(0.0)) - PI).abs() < 1e-15);
        assert_eq!(boundary_angle(Boundary::Infinity), 0.0);
        assert!((boundary_angle(Boundary::Finite(1.0)) + FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn dilation_examples() {
        let p = dilate(&HPoint::new(0.0, 0.0), 1.0);
        assert_eq!(p, HPoint::new(0.0, 1.0));
        let q = HPoint::new(0.7, -0.2);
        assert_eq!(dilate(&q, 0.0), q);
        let log_t = 1e30f64.ln();
        let a = PolarPoint::new(0.2, 0.0).unwrap();
        let b = PolarPoint::new(PI - 0.2, 0.0).unwrap();
        let before = polar_distance(a, b).unwrap();
        let after = polar_distance(dilate(&a, log_t), dilate(&b, log_t)).unwrap();
        assert!((before - after).abs() < 1e-12);
        assert!((before - symmetric_pair_distance(0.2).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn unit_vector_validation() {
        assert!(UnitVector::new(1.0, 1.0).is_err());
        let u = UnitVector::normalized(3.0, 4.0).unwrap();
        assert!((u.ux() - 0.6).abs() < 1e-15);
        assert!(UnitVector::normalized(0.0, 0.0).is_err());
    }

    fn point() -> impl Strategy<Value = HPoint> {
        (-50.0f64..50.0, -5.0f64..5.0).prop_map(|(x, ly)| HPoint::new(x, ly))
    }

    proptest! {
        #[test]
        fn distance_symmetric(p in point(), q in point()) {
            let a = hyp_distance(p, q).unwrap();
            let b = hyp_distance(q, p).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
            prop_assert!(a >= 0.0);
            if p != q { prop_assert!(a > 0.0); }
        }

        #[test]
        fn dilation_is_isometry(p in point(), q in point(), log_t in -100.0f64..100.0) {
            let before = hyp_distance(p, q).unwrap();
            let after = hyp_distance(p.dilate(log_t), q.dilate(log_t)).unwrap();
            prop_assert!((before - after).abs() <= 1e-12 * (1.0 + before), "{} vs {}", before, after);
        }

        #[test]
        fn boundary_angle_increases(mut xs in proptest::collection::vec(-1e3f64..1e3, 2..40)) {
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            // Unwrap across the single jump at b = 0: angles on each side of
            // zero increase, and every negative b precedes every positive b.
            let unwrap = |b: f64| {
                let a = boundary_angle(Boundary::Finite(b));
                if b > 0.0 { a + 2.0 * PI } else { a }
            };
            for w in xs.windows(2) {
                prop_assert!(unwrap(w[0]) < unwrap(w[1]), "{:?}", w);
            }
            // ∞ closes the circle: above every finite unwrapped angle mod 2π.
            let inf = boundary_angle(Boundary::Infinity) + 2.0 * PI;
            prop_assert!(unwrap(*xs.last().unwrap()) < inf);
            prop_assert!(unwrap(xs[0]) > boundary_angle(Boundary::Infinity));
        }
    }
}
