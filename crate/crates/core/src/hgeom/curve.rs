//! Parametrized plane curves and their derivatives.

/// Value and first two derivatives of a curve at one parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveJet {
    pub point: [f64; 2],
    pub d1: [f64; 2],
    pub d2: [f64; 2],
}

/// A curve `s ↦ (x, y)` in the plane (for hyperbolic uses, the upper
/// half-plane model). The positive side is the left of the direction of
/// travel.
pub trait PlaneCurve {
    fn point(&self, s: f64) -> [f64; 2];

    /// Analytic derivatives, if the curve knows them.
    fn jet(&self, _s: f64) -> Option<CurveJet> {
        None
    }
}

impl<C: PlaneCurve + ?Sized> PlaneCurve for &C {
    fn point(&self, s: f64) -> [f64; 2] {
        (**self).point(s)
    }

    fn jet(&self, s: f64) -> Option<CurveJet> {
        (**self).jet(s)
    }
}

/// How derivatives are obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Derivatives {
    /// Use [`PlaneCurve::jet`]; fails if the curve has none.
    Analytic,
    /// Central differences with the given step in (approximate) arc length.
    Central { arc_step: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub enum DerivativeError {
    #[error("curve has no analytic derivatives")]
    NoAnalyticJet,
    #[error("non-finite curve sample near s = {s}")]
    NonFinite { s: f64 },
    #[error("curve is not twice differentiable near s = {s}")]
    NotDifferentiable { s: f64 },
    #[error("degenerate (zero-speed) parametrization at s = {s}")]
    ZeroSpeed { s: f64 },
}

/// Central second difference of a scalar sample triple.
fn second_diff(minus: f64, mid: f64, plus: f64, h: f64) -> f64 {
    (plus - 2.0 * mid + minus) / (h * h)
}

/// Whether second differences at steps `h` and `2h` are consistent with
/// a twice-differentiable function. A jump in the first derivative makes
/// the two estimates differ by a factor of two.
pub(crate) fn smooth_second_diff(d2_h: f64, d2_2h: f64, scale: f64, h: f64) -> bool {
    let roundoff = 1e4 * f64::EPSILON * (scale + 1.0) / (h * h);
    (d2_h - d2_2h).abs() <= 0.25 * d2_h.abs().max(d2_2h.abs()) + roundoff
}

/// Jet of `curve` at `s` by the chosen method.
pub fn curve_jet<C: PlaneCurve + ?Sized>(
    curve: &C,
    s: f64,
    method: Derivatives,
) -> Result<CurveJet, DerivativeError> {
    let jet = match method {
        Derivatives::Analytic => curve.jet(s).ok_or(DerivativeError::NoAnalyticJet)?,
        Derivatives::Central { arc_step } => central_jet(curve, s, arc_step)?,
    };
    let finite = jet
        .point
        .iter()
        .chain(jet.d1.iter())
        .chain(jet.d2.iter())
        .all(|v| v.is_finite());
    if !finite {
        return Err(DerivativeError::NonFinite { s });
    }
    let speed = jet.d1[0].hypot(jet.d1[1]);
    let scale = jet.point[0].abs().max(jet.point[1].abs()).max(1.0);
    if speed <= 1e-14 * scale {
        return Err(DerivativeError::ZeroSpeed { s });
    }
    Ok(jet)
}

fn central_jet<C: PlaneCurve + ?Sized>(
    curve: &C,
    s: f64,
    arc_step: f64,
) -> Result<CurveJet, DerivativeError> {
    let p = curve.point(s);
    // Convert the arc-length step to a parameter step using the local speed.
    let probe_plus = curve.point(s + arc_step);
    let probe_minus = curve.point(s - arc_step);
    let probe_speed = (probe_plus[0] - probe_minus[0]).hypot(probe_plus[1] - probe_minus[1])
        / (2.0 * arc_step);
    if !probe_speed.is_finite() {
        return Err(DerivativeError::NonFinite { s });
    }
    if probe_speed == 0.0 {
        return Err(DerivativeError::ZeroSpeed { s });
    }
    let h = arc_step / probe_speed;
    let plus = curve.point(s + h);
    let minus = curve.point(s - h);
    let plus2 = curve.point(s + 2.0 * h);
    let minus2 = curve.point(s - 2.0 * h);
    let mut d1 = [0.0; 2];
    let mut d2 = [0.0; 2];
    for k in 0..2 {
        d1[k] = (plus[k] - minus[k]) / (2.0 * h);
        d2[k] = second_diff(minus[k], p[k], plus[k], h);
        let d2_wide = second_diff(minus2[k], p[k], plus2[k], 2.0 * h);
        let scale = p[k].abs().max(plus2[k].abs()).max(minus2[k].abs());
        if !(d2[k].is_finite() && d2_wide.is_finite()) {
            return Err(DerivativeError::NonFinite { s });
        }
        if !smooth_second_diff(d2[k], d2_wide, scale, h) {
            return Err(DerivativeError::NotDifferentiable { s });
        }
    }
    Ok(CurveJet { point: p, d1, d2 })
}

/// Signed Euclidean curvature (positive when bending to the left) and the
/// left unit normal.
pub fn euclidean_curvature_and_normal(jet: &CurveJet) -> (f64, [f64; 2]) {
    let [dx, dy] = jet.d1;
    let [ddx, ddy] = jet.d2;
    let speed = dx.hypot(dy);
    let kappa = (dx * ddy - dy * ddx) / (speed * speed * speed);
    (kappa, [-dy / speed, dx / speed])
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Kinked;
    impl PlaneCurve for Kinked {
        fn point(&self, s: f64) -> [f64; 2] {
            [s, 1.0 + s.abs()]
        }
    }

    struct Stalled;
    impl PlaneCurve for Stalled {
        fn point(&self, s: f64) -> [f64; 2] {
            [s * s * s, 1.0]
        }
        fn jet(&self, s: f64) -> Option<CurveJet> {
            Some(CurveJet {
                point: self.point(s),
                d1: [3.0 * s * s, 0.0],
                d2: [6.0 * s, 0.0],
            })
        }
    }

    #[test]
    fn kink_is_rejected() {
        let err = curve_jet(&Kinked, 0.0, Derivatives::Central { arc_step: 1e-4 }).unwrap_err();
        assert_eq!(err, DerivativeError::NotDifferentiable { s: 0.0 });
        assert!(curve_jet(&Kinked, 0.5, Derivatives::Central { arc_step: 1e-4 }).is_ok());
    }

    #[test]
    fn zero_speed_is_rejected() {
        let err = curve_jet(&Stalled, 0.0, Derivatives::Analytic).unwrap_err();
        assert_eq!(err, DerivativeError::ZeroSpeed { s: 0.0 });
    }

    #[test]
    fn missing_analytic_jet() {
        let err = curve_jet(&Kinked, 0.5, Derivatives::Analytic).unwrap_err();
        assert_eq!(err, DerivativeError::NoAnalyticJet);
    }
}
