//! Euclidean-plane counterpart of the kernel: curvature and arc length of
//! function graphs, and distances between points whose heights may be
//! carried as logs.

use crate::hgeom::{smooth_second_diff, Derivatives, GeomError, LogScalar};
use crate::quad::{integrate, QuadError, QuadSettings};

/// Height of a Euclidean point: plain, or as a log once it outgrows `f64`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Height {
    Plain(f64),
    Log(LogScalar),
}

impl Height {
    /// Plain value when representable.
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Height::Plain(y) => Some(*y),
            Height::Log(l) => l.to_f64(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EPoint {
    pub x: f64,
    pub y: Height,
}

impl EPoint {
    pub fn new(x: f64, y: f64) -> Self {
        EPoint {
            x,
            y: Height::Plain(y),
        }
    }

    pub fn with_log_height(x: f64, log_y: f64) -> Self {
        EPoint {
            x,
            y: Height::Log(LogScalar::from_log(log_y)),
        }
    }
}

/// `ln |a − b|` for two positive magnitudes given as logs.
fn ln_abs_diff(la: f64, lb: f64) -> f64 {
    let (hi, lo) = if la >= lb { (la, lb) } else { (lb, la) };
    if hi == lo {
        return f64::NEG_INFINITY;
    }
    hi + (-(lo - hi).exp_m1()).ln()
}

/// `ln |Δy|`; `-inf` when the heights coincide.
fn ln_height_gap(a: Height, b: Height) -> Result<f64, GeomError> {
    let as_log = |h: Height| -> Result<(f64, bool), GeomError> {
        match h {
            Height::Plain(y) if y.is_finite() => Ok((y.abs().ln(), y < 0.0)),
            Height::Plain(_) => Err(GeomError::Saturated),
            Height::Log(l) if l.is_saturated() => Err(GeomError::Saturated),
            Height::Log(l) => Ok((l.log_value(), false)),
        }
    };
    if let (Height::Plain(ya), Height::Plain(yb)) = (a, b) {
        let d = (ya - yb).abs();
        return Ok(if d == 0.0 { f64::NEG_INFINITY } else { d.ln() });
    }
    let (la, neg_a) = as_log(a)?;
    let (lb, neg_b) = as_log(b)?;
    if neg_a != neg_b {
        // opposite signs: |a| + |b|
        return Ok(LogScalar::from_log(la).add(LogScalar::from_log(lb)).log_value());
    }
    Ok(ln_abs_diff(la, lb))
}

/// Euclidean distance. Heights carried as logs are subtracted in log
/// space; a result beyond `f64` range is reported as saturated.
pub fn euc_distance(p: EPoint, q: EPoint) -> Result<f64, GeomError> {
    if !(p.x.is_finite() && q.x.is_finite()) {
        return Err(GeomError::Saturated);
    }
    let ln_dy = ln_height_gap(p.y, q.y)?;
    let dx = (p.x - q.x).abs();
    let ln_dx = if dx == 0.0 { f64::NEG_INFINITY } else { dx.ln() };
    let (hi, lo) = if ln_dx >= ln_dy { (ln_dx, ln_dy) } else { (ln_dy, ln_dx) };
    if hi == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    if hi <= LogScalar::EXP_LIMIT {
        return Ok(dx.hypot(ln_dy.exp()));
    }
    // sqrt(e^{2hi} + e^{2lo}) = e^{hi} sqrt(1 + e^{2(lo−hi)})
    let ln_d = hi + 0.5 * (2.0 * (lo - hi)).exp().ln_1p();
    if ln_d > LogScalar::EXP_LIMIT {
        return Err(GeomError::Saturated);
    }
    Ok(ln_d.exp())
}

/// A function `x ↦ φ(x)` whose graph is a plane curve.
pub trait GraphFunction {
    fn value(&self, x: f64) -> f64;

    /// `(φ, φ', φ'')` when known analytically.
    fn jet(&self, _x: f64) -> Option<(f64, f64, f64)> {
        None
    }
}

/// Wraps a closure; derivatives come from central differences.
pub struct FnGraph<F>(pub F);

impl<F: Fn(f64) -> f64> GraphFunction for FnGraph<F> {
    fn value(&self, x: f64) -> f64 {
        (self.0)(x)
    }
}

/// The parabola `δ x²`.
#[derive(Clone, Copy, Debug)]
pub struct Parabola {
    pub delta: f64,
}

impl GraphFunction for Parabola {
    fn value(&self, x: f64) -> f64 {
        self.delta * x * x
    }

    fn jet(&self, x: f64) -> Option<(f64, f64, f64)> {
        Some((self.value(x), 2.0 * self.delta * x, 2.0 * self.delta))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("graph interval [{a}, {b}] is reversed")]
    ReversedInterval { a: f64, b: f64 },
}

/// `(φ, φ', φ'')` at `x`.
pub fn graph_jet<G: GraphFunction + ?Sized>(
    phi: &G,
    x: f64,
    method: Derivatives,
) -> Result<(f64, f64, f64), GeomError> {
    use crate::hgeom::DerivativeError as D;
    let jet = match method {
        Derivatives::Analytic => phi.jet(x).ok_or(D::NoAnalyticJet)?,
        Derivatives::Central { arc_step: h } => {
            let f0 = phi.value(x);
            let (fp, fm) = (phi.value(x + h), phi.value(x - h));
            let (fp2, fm2) = (phi.value(x + 2.0 * h), phi.value(x - 2.0 * h));
            let d2 = (fp - 2.0 * f0 + fm) / (h * h);
            let d2_wide = (fp2 - 2.0 * f0 + fm2) / (4.0 * h * h);
            if !(d2.is_finite() && d2_wide.is_finite()) {
                return Err(D::NonFinite { s: x }.into());
            }
            let scale = f0.abs().max(fp2.abs()).max(fm2.abs());
            if !smooth_second_diff(d2, d2_wide, scale, h) {
                return Err(D::NotDifferentiable { s: x }.into());
            }
            (f0, (fp - fm) / (2.0 * h), d2)
        }
    };
    if !(jet.0.is_finite() && jet.1.is_finite() && jet.2.is_finite()) {
        return Err(D::NonFinite { s: x }.into());
    }
    Ok(jet)
}

/// Signed curvature `φ'' / (1 + φ'²)^{3/2}` of the graph at `x`.
pub fn euc_curvature_graph<G: GraphFunction + ?Sized>(
    phi: &G,
    x: f64,
    method: Derivatives,
) -> Result<f64, GeomError> {
    let (_, d1, d2) = graph_jet(phi, x, method)?;
    Ok(graph_curvature(d1, d2))
}

/// Curvature of a graph from its first two derivatives.
pub fn graph_curvature(d1: f64, d2: f64) -> f64 {
    let s = 1.0 + d1 * d1;
    if s.is_finite() {
        d2 / (s * s.sqrt())
    } else {
        // |φ'| beyond 1e154: (1 + φ'²)^{3/2} ≈ |φ'|³
        d2 / d1.abs() / d1.abs() / d1.abs()
    }
}

/// `√(1 + p²) − |p| = 1 / (√(1 + p²) + |p|)`, free of cancellation.
pub(crate) fn arc_excess(p: f64) -> f64 {
    let p = p.abs();
    if p > 1e150 {
        return 0.5 / p;
    }
    1.0 / ((1.0 + p * p).sqrt() + p)
}

/// Length of the graph over `[a, b]`.
///
/// Where `φ` is monotone the length is split as `|φ(b) − φ(a)|` plus the
/// bounded integral of `√(1 + φ'²) − |φ'|`: for steep, nearly vertical
/// pieces this is integration along the height with the vertical travel
/// taken exactly.
pub fn graph_arc_length<G: GraphFunction + ?Sized>(
    phi: &G,
    a: f64,
    b: f64,
    method: Derivatives,
) -> Result<f64, GraphError> {
    if b < a {
        return Err(GraphError::ReversedInterval { a, b });
    }
    if a == b {
        return Ok(0.0);
    }
    let slope = |x: f64| graph_jet(phi, x, method).map(|j| j.1);
    let probes = 64;
    let mut signs = (false, false);
    for i in 0..=probes {
        let x = a + (b - a) * i as f64 / probes as f64;
        let p = slope(x)?;
        signs.0 |= p > 0.0;
        signs.1 |= p < 0.0;
    }
    let settings = QuadSettings::default();
    let rise = (phi.value(b) - phi.value(a)).abs();
    let length = if signs.0 && signs.1 {
        integrate(
            |x| slope(x).map(|p| (1.0 + p * p).sqrt()).unwrap_or(f64::NAN),
            a,
            b,
            settings,
        )?
        .value
    } else {
        rise + integrate(
            |x| slope(x).map(arc_excess).unwrap_or(f64::NAN),
            a,
            b,
            settings,
        )?
        .value
    };
    Ok(length.max(rise).max(b - a))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FD: Derivatives = Derivatives::Central { arc_step: 1e-4 };

    #[test]
    fn parabola_vertex_curvature() {
        let p = Parabola { delta: 0.05 };
        assert_eq!(euc_curvature_graph(&p, 0.0, Derivatives::Analytic).unwrap(), 0.1);
        assert!((euc_curvature_graph(&p, 0.0, FD).unwrap() - 0.1).abs() < 1e-6);
    }

    #[test]
    fn affine_graphs_are_flat() {
        let line = FnGraph(|x: f64| 3.0 * x - 2.0);
        for x in [-4.0, 0.0, 0.7, 12.0] {
            assert!(euc_curvature_graph(&line, x, FD).unwrap().abs() < 1e-6);
        }
    }

    #[test]
    fn lower_unit_circle() {
        let arc = FnGraph(|x: f64| 1.0 - (1.0 - x * x).sqrt());
        let k = euc_curvature_graph(&arc, 0.0, FD).unwrap();
        assert!((k - 1.0).abs() < 1e-6);
        // analytic: φ' = x/√(1−x²), φ'' = (1−x²)^{-3/2} → κ = 1 everywhere
        let k = euc_curvature_graph(&arc, 0.5, FD).unwrap();
        assert!((k - 1.0).abs() < 1e-6);
    }

    #[test]
    fn kinked_graph_is_rejected() {
        let v = FnGraph(|x: f64| x.abs());
        assert!(euc_curvature_graph(&v, 0.0, FD).is_err());
    }

    #[test]
    fn analytic_and_central_agree() {
        let p = Parabola { delta: 0.37 };
        for x in [-2.0, -0.1, 0.4, 3.0] {
            let a = euc_curvature_graph(&p, x, Derivatives::Analytic).unwrap();
            let c = euc_curvature_graph(&p, x, FD).unwrap();
            assert!((a - c).abs() < 1e-5);
        }
    }

    #[test]
    fn distance_examples() {
        assert_eq!(euc_distance(EPoint::new(-3.0, 5.0), EPoint::new(3.0, 5.0)).unwrap(), 6.0);
        assert_eq!(euc_distance(EPoint::new(0.0, 0.0), EPoint::new(3.0, 4.0)).unwrap(), 5.0);
        let a = EPoint::with_log_height(-2.5, 600.0);
        let b = EPoint::with_log_height(2.5, 600.0);
        assert_eq!(euc_distance(a, b).unwrap(), 5.0);
        let c = EPoint::with_log_height(0.0, 800.0);
        assert_eq!(euc_distance(a, c), Err(GeomError::Saturated));
    }

    #[test]
    fn mixed_height_forms() {
        let a = EPoint::new(0.0, 3.0);
        let b = EPoint::with_log_height(0.0, 7f64.ln());
        assert!((euc_distance(a, b).unwrap() - 4.0).abs() < 1e-12);
        let c = EPoint::new(0.0, -1.0);
        assert!((euc_distance(c, b).unwrap() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn arc_length_examples() {
        let flat = FnGraph(|_x: f64| 2.0);
        assert!((graph_arc_length(&flat, 0.0, 7.0, FD).unwrap() - 7.0).abs() < 1e-12);
        let diag = FnGraph(|x: f64| x);
        let l = graph_arc_length(&diag, 0.0, 1.0, FD).unwrap();
        assert!((l - 2f64.sqrt()).abs() < 1e-9);
        let steep = FnGraph(|x: f64| 1e6 * x * x);
        let l = graph_arc_length(&steep, 0.0, 1.0, FD).unwrap();
        assert!((1e6..=1e6 + 1.0).contains(&l), "{l}");
    }

    #[test]
    fn arc_length_of_non_monotone_graph() {
        // ∫_{-1}^{1} √(1 + 4x²) dx = √5 + asinh(2)/2
        let p = Parabola { delta: 1.0 };
        let l = graph_arc_length(&p, -1.0, 1.0, Derivatives::Analytic).unwrap();
        assert!((l - (5f64.sqrt() + 0.5 * 2f64.asinh())).abs() < 1e-9);
        assert!(graph_arc_length(&p, 1.0, -1.0, Derivatives::Analytic).is_err());
    }

    proptest::proptest! {
        #[test]
        fn arc_length_dominates_chord_components(
            c in -3.0f64..3.0, d in -3.0f64..3.0, a in -2.0f64..0.0, w in 0.01f64..3.0
        ) {
            let g = FnGraph(move |x: f64| c * x * x + d * x.sin());
            let b = a + w;
            let l = graph_arc_length(&g, a, b, FD).unwrap();
            let rise = (g.value(b) - g.value(a)).abs();
            proptest::prop_assert!(l >= rise && l >= w);
        }
    }
}
