//! The hyperbolic leaf: horocycle core plus near-radial spikes.
//!
//! Coordinates are polar about the origin, `ρ = ln r` as a function of
//! `θ`. Spikes are stored as quintics in `w = −ln θ`, where a Euclidean
//! ray of small slope is close to affine. The left half is the mirror
//! image `ρ(θ) = ρ(π − θ)`.

use std::f64::consts::{FRAC_PI_2, PI};

use super::hermite::Quintic;
use super::shaping::{descend, Problem, SEARCH_SAMPLES};
use super::{anchor_logs, ConstructionError, ConstructionParams, Geometry, LeafError};
use crate::growth::GrowthOracle;
use crate::hgeom::{CurveJet, LogScalar, PlaneCurve};
use crate::quad::{integrate, QuadSettings};
use crate::scan::scan_interval;

/// Spike `n`: the piece over `θ ∈ [theta_lo, theta_hi] = [δ/2ⁿ⁺¹, δ/2ⁿ]`,
/// whose outer end is the anchor of `r_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spike {
    pub n: usize,
    pub theta_lo: f64,
    pub theta_hi: f64,
    /// `ρ(w)` on `[−ln theta_hi, −ln theta_lo]`.
    pub spline: Quintic,
    /// `ln r_n` as delivered by the oracle.
    pub log_radius: f64,
}

impl Spike {
    pub(crate) fn new(n: usize, theta_lo: f64, theta_hi: f64, left: [f64; 3], right: [f64; 3], log_radius: f64) -> Self {
        Spike {
            n,
            theta_lo,
            theta_hi,
            spline: Quintic {
                x0: -theta_hi.ln(),
                x1: -theta_lo.ln(),
                left,
                right,
            },
            log_radius,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LeafCurve {
    params: ConstructionParams,
    oracle: Option<GrowthOracle>,
    spikes: Vec<Spike>,
    offset: f64,
}

/// `(ρ, ρ_w, ρ_ww)` of the horocycle `y = 1`, i.e. `ρ = −ln sin θ`.
pub(crate) fn core_w_jet(theta: f64) -> [f64; 3] {
    let (s, c) = theta.sin_cos();
    let p = theta * c / s;
    [-s.ln(), p, theta * theta / (s * s) - p]
}

/// Geodesic curvature of `ρ(w)` at `θ = e^{−w}`, positive toward larger
/// `ρ` when travelling toward smaller `θ`.
pub(crate) fn kappa_w(theta: f64, p: f64, q: f64) -> f64 {
    let den = theta.hypot(p);
    theta * theta.sin() * (q + p) / (den * den * den) + p * theta.cos() / den
}

fn angle_step(delta: f64, k: usize) -> f64 {
    delta / 2f64.powi(k as i32)
}

impl LeafCurve {
    /// The horocycle `y = 1` through `i` as a leaf with no spikes. It is
    /// defined for every `θ ∈ (0, π)`.
    pub fn horocycle(delta: f64) -> Self {
        LeafCurve {
            params: ConstructionParams {
                delta,
                n_max: 0,
                ..ConstructionParams::default_h2()
            },
            oracle: None,
            spikes: Vec::new(),
            offset: 0.0,
        }
    }

    pub(crate) fn from_parts(
        params: ConstructionParams,
        oracle: Option<GrowthOracle>,
        spikes: Vec<Spike>,
        offset: f64,
    ) -> Self {
        LeafCurve {
            params,
            oracle,
            spikes,
            offset,
        }
    }

    pub fn params(&self) -> &ConstructionParams {
        &self.params
    }

    pub fn oracle(&self) -> Option<&GrowthOracle> {
        self.oracle.as_ref()
    }

    pub fn spikes(&self) -> &[Spike] {
        &self.spikes
    }

    /// `ln t` of the dilation applied to the base leaf.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn is_pure_horocycle(&self) -> bool {
        self.spikes.is_empty()
    }

    /// Smallest constructed angle; `0` (open) for the pure horocycle.
    pub fn theta_min(&self) -> f64 {
        self.spikes.last().map_or(0.0, |s| s.theta_lo)
    }

    /// Angle of the anchor of `r_n`.
    pub fn anchor_theta(&self, n: usize) -> Option<f64> {
        self.spikes.get(n).map(|s| s.theta_lo)
    }

    /// `ρ` at the anchor of `r_n`, as stored.
    pub fn anchor_log_r(&self, n: usize) -> Option<f64> {
        self.spikes.get(n).map(|s| s.spline.right[0] + self.offset)
    }

    /// The image under `z ↦ e^{log_t}·z`.
    pub fn dilated(&self, log_t: f64) -> LeafCurve {
        LeafCurve {
            offset: self.offset + log_t,
            ..self.clone()
        }
    }

    /// Right-half angle and whether `theta` was mirrored.
    fn locate(&self, theta: f64) -> Result<(f64, bool), LeafError> {
        let min = self.theta_min();
        let err = LeafError::OutOfDomain {
            value: theta,
            min,
            max: PI - min,
        };
        if !(theta > 0.0 && theta < PI) {
            return Err(err);
        }
        let (tr, mirrored) = if theta > FRAC_PI_2 {
            (PI - theta, true)
        } else {
            (theta, false)
        };
        if tr < min {
            // π − (π − θ) may land one ulp short of θ
            if tr >= min * (1.0 - 1e-12) {
                return Ok((min, mirrored));
            }
            return Err(err);
        }
        Ok((tr, mirrored))
    }

    fn in_core(&self, tr: f64) -> bool {
        self.spikes.is_empty() || tr >= self.params.delta
    }

    fn spike_at(&self, w: f64) -> &Spike {
        self.spikes
            .iter()
            .find(|s| w <= s.spline.x1)
            .unwrap_or_else(|| self.spikes.last().expect("spike region implies spikes"))
    }

    /// `(ρ, ρ_w, ρ_ww)` at a right-half angle in the domain, without offset.
    fn w_jet(&self, tr: f64) -> [f64; 3] {
        if self.in_core(tr) {
            return core_w_jet(tr);
        }
        let w = -tr.ln();
        let s = self.spike_at(w);
        s.spline.eval(w.clamp(s.spline.x0, s.spline.x1))
    }

    /// `ρ(θ) = ln r` of the leaf point at angle `θ`.
    pub fn eval(&self, theta: f64) -> Result<f64, LeafError> {
        let (tr, _) = self.locate(theta)?;
        Ok(self.w_jet(tr)[0] + self.offset)
    }

    /// `(ρ, dρ/dθ, d²ρ/dθ²)`.
    pub fn jet(&self, theta: f64) -> Result<[f64; 3], LeafError> {
        let (tr, mirrored) = self.locate(theta)?;
        let [rho, p, q] = self.w_jet(tr);
        let d1 = -p / tr;
        let d2 = (q + p) / (tr * tr);
        Ok([rho + self.offset, if mirrored { -d1 } else { d1 }, d2])
    }

    /// Geodesic curvature at angle `θ`. Invariant under dilation and under
    /// the mirror.
    pub fn curvature(&self, theta: f64) -> Result<f64, LeafError> {
        let (tr, _) = self.locate(theta)?;
        let [_, p, q] = self.w_jet(tr);
        Ok(kappa_w(tr, p, q))
    }

    /// Segment junction angles inside the domain, ascending, both halves.
    pub fn breakpoints(&self) -> Vec<f64> {
        if self.spikes.is_empty() {
            return Vec::new();
        }
        let mut right: Vec<f64> = self.spikes.iter().map(|s| s.theta_lo).collect();
        right.reverse();
        right.push(self.params.delta);
        let mut all = right.clone();
        all.extend(right.iter().rev().map(|t| PI - t));
        all
    }

    /// Hyperbolic length of the leaf between angles `theta1 ≤ theta2`.
    pub fn arc_length(&self, theta1: f64, theta2: f64) -> Result<LogScalar, LeafError> {
        if theta2 < theta1 {
            return Err(LeafError::Reversed {
                a: theta1,
                b: theta2,
            });
        }
        self.locate(theta1)?;
        self.locate(theta2)?;
        let mut cuts = vec![theta1];
        cuts.extend(
            self.breakpoints()
                .into_iter()
                .filter(|&t| t > theta1 && t < theta2),
        );
        cuts.push(theta2);
        let mut total = LogScalar::from_value(0.0);
        for pair in cuts.windows(2) {
            let piece = self.piece_length(pair[0], pair[1])?;
            total = total.add(LogScalar::from_value(piece));
        }
        Ok(total)
    }

    /// Length over `[u, v]` lying inside one segment.
    fn piece_length(&self, u: f64, v: f64) -> Result<f64, LeafError> {
        if u == v {
            return Ok(0.0);
        }
        let mid = 0.5 * (u + v);
        let (a, b) = if mid > FRAC_PI_2 { (PI - v, PI - u) } else { (u, v) };
        let (a, _) = self.locate(a)?;
        let (b, _) = self.locate(b)?;
        if self.spikes.is_empty()
            || (mid >= self.params.delta && mid <= PI - self.params.delta)
        {
            // horocycle y = 1: length is |Δx| = |cot u − cot v|
            return Ok((v - u).sin() / (u.sin() * v.sin()));
        }
        let s = self.spike_at(-(0.5 * (a + b)).ln()).clone();
        let f = move |w: f64| {
            let th = (-w).exp();
            let p = s.spline.eval(w)[1];
            p.hypot(th) / th.sin()
        };
        Ok(integrate(f, -b.ln(), -a.ln(), QuadSettings::default())?.value)
    }

    /// The leaf as a plane curve in the half-plane model, parameter
    /// `s = π/2 − θ`. Only usable where `e^ρ` fits an `f64`.
    pub fn path(&self) -> LeafPath<'_> {
        LeafPath { leaf: self }
    }
}

/// See [`LeafCurve::path`].
#[derive(Clone, Copy, Debug)]
pub struct LeafPath<'a> {
    leaf: &'a LeafCurve,
}

impl PlaneCurve for LeafPath<'_> {
    fn point(&self, s: f64) -> [f64; 2] {
        let theta = FRAC_PI_2 - s;
        match self.leaf.eval(theta) {
            Ok(rho) => {
                let r = rho.exp();
                [r * theta.cos(), r * theta.sin()]
            }
            Err(_) => [f64::NAN, f64::NAN],
        }
    }

    fn jet(&self, s: f64) -> Option<CurveJet> {
        let theta = FRAC_PI_2 - s;
        let [rho, r1, r2] = self.leaf.jet(theta).ok()?;
        let r = rho.exp();
        let (sn, cs) = theta.sin_cos();
        // derivatives in θ; d/ds = −d/dθ
        let d1 = [r * (r1 * cs - sn), r * (r1 * sn + cs)];
        let radial = r2 + r1 * r1 - 1.0;
        let d2 = [
            r * (radial * cs - 2.0 * r1 * sn),
            r * (radial * sn + 2.0 * r1 * cs),
        ];
        Some(CurveJet {
            point: [r * cs, r * sn],
            d1: [-d1[0], -d1[1]],
            d2,
        })
    }
}

/// Builds the H² leaf for `params` and the anchor radii of `oracle`.
///
/// Spike `n` rises from `ρ(δ/2ⁿ)` to `ρ(δ/2ⁿ⁺¹) = −ln sin δ + ln r_n`, so
/// the radii are measured relative to the junction radius `1/sin δ`.
pub fn build_h2_leaf(
    params: &ConstructionParams,
    oracle: &GrowthOracle,
) -> Result<LeafCurve, ConstructionError> {
    params.validate(Geometry::H2)?;
    let logs = anchor_logs(oracle, params.n_max)?;
    let delta = params.delta;
    let n_seg = params.n_max + 1;
    let thetas: Vec<f64> = (0..=n_seg).map(|k| angle_step(delta, k)).collect();
    let ws: Vec<f64> = thetas.iter().map(|t| -t.ln()).collect();
    let junction = core_w_jet(delta);
    let mut rho = vec![junction[0]];
    rho.extend(logs.iter().map(|l| junction[0] + l));
    let secant: Vec<f64> = (0..n_seg)
        .map(|k| (rho[k + 1] - rho[k]) / (ws[k + 1] - ws[k]))
        .collect();

    // x = [p_1, q_1, ..., p_{n_seg}, q_{n_seg}] at anchors 1..=n_seg
    let mut x = Vec::with_capacity(2 * n_seg);
    for i in 1..=n_seg {
        let p = if i < n_seg {
            let (a, b) = (secant[i - 1], secant[i]);
            2.0 * a * b / (a + b)
        } else {
            secant[n_seg - 1]
        };
        x.extend([p, 0.0]);
    }

    let anchor = |x: &[f64], i: usize| -> [f64; 3] {
        if i == 0 {
            junction
        } else {
            [rho[i], x[2 * i - 2], x[2 * i - 1]]
        }
    };
    let segment = |x: &[f64], k: usize| Quintic {
        x0: ws[k],
        x1: ws[k + 1],
        left: anchor(x, k),
        right: anchor(x, k + 1),
    };
    let defect = |q: &Quintic, w: f64| -> f64 {
        let [_, p, qq] = q.eval(w);
        if p < 0.0 {
            return f64::INFINITY;
        }
        (kappa_w((-w).exp(), p, qq) - 1.0).abs()
    };
    let cost = |x: &[f64], k: usize| -> f64 {
        let q = segment(x, k);
        let h = q.width() / (SEARCH_SAMPLES - 1) as f64;
        (0..SEARCH_SAMPLES)
            .map(|i| defect(&q, q.x0 + h * i as f64))
            .fold(0.0, f64::max)
    };
    let affects = |j: usize| {
        let i = j / 2 + 1;
        if i < n_seg {
            vec![i - 1, i]
        } else {
            vec![i - 1]
        }
    };
    let positive = |j: usize| j % 2 == 0;
    let problem = Problem {
        n_segments: n_seg,
        affects: &affects,
        cost: &cost,
        positive: &positive,
    };
    descend(&problem, &mut x, 0.95 * params.epsilon);

    let eps = params.epsilon;
    let mut spikes = Vec::with_capacity(n_seg);
    for k in 0..n_seg {
        let q = segment(&x, k);
        let name = format!("spike {k}");
        let slope = scan_interval(
            |w| Ok::<_, ConstructionError>(q.eval(w)[1]),
            q.x0,
            q.x1,
            params.samples_per_segment,
        )?;
        if slope.min < 0.0 {
            return Err(ConstructionError::NotMonotone {
                segment: name,
                at: (-slope.argmin).exp(),
            });
        }
        let ext = scan_interval(
            |w| {
                let [_, p, qq] = q.eval(w);
                Ok::<_, ConstructionError>(kappa_w((-w).exp(), p, qq))
            },
            q.x0,
            q.x1,
            params.samples_per_segment,
        )?;
        if ext.max_deviation(1.0) > eps {
            let worst = if (ext.max - 1.0).abs() >= (ext.min - 1.0).abs() {
                ext.max
            } else {
                ext.min
            };
            return Err(ConstructionError::PinchInfeasible {
                segment: name,
                worst_kappa: worst,
                bound: format!("[{}, {}]", 1.0 - eps, 1.0 + eps),
            });
        }
        spikes.push(Spike::new(
            k,
            thetas[k + 1],
            thetas[k],
            q.left,
            q.right,
            logs[k],
        ));
    }
    Ok(LeafCurve {
        params: *params,
        oracle: Some(oracle.clone()),
        spikes,
        offset: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgeom::{hyp_curvature, polar_distance, Derivatives, PolarPoint};
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn tower_leaf() -> &'static LeafCurve {
        static LEAF: OnceLock<LeafCurve> = OnceLock::new();
        LEAF.get_or_init(|| {
            build_h2_leaf(&ConstructionParams::default_h2(), &GrowthOracle::Tower).unwrap()
        })
    }

    #[test]
    fn core_is_the_horocycle() {
        let leaf = tower_leaf();
        assert_eq!(leaf.eval(FRAC_PI_2).unwrap(), 0.0);
        let j = leaf.eval(0.1).unwrap();
        assert!((j - 2.30425).abs() < 1e-5, "{j}");
        for t in [0.1, 0.5, 1.2, 2.0, PI - 0.1] {
            assert!((leaf.eval(t).unwrap() + t.sin().ln()).abs() < 1e-15);
            assert!((leaf.curvature(t).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn anchors_are_exact() {
        let leaf = tower_leaf();
        let rho_j = -(0.1f64).sin().ln();
        for (n, ln_r) in [1.0, 2.0, 4.0].iter().enumerate() {
            let theta = 0.1 / 2f64.powi(n as i32 + 1);
            assert_eq!(leaf.anchor_theta(n), Some(theta));
            assert_eq!(leaf.eval(theta).unwrap(), rho_j + ln_r);
            assert_eq!(leaf.spikes()[n].log_radius, *ln_r);
        }
    }

    #[test]
    fn junctions_are_c2() {
        let leaf = tower_leaf();
        let core = core_w_jet(0.1);
        let first = leaf.spikes()[0].spline.eval(leaf.spikes()[0].spline.x0);
        for k in 0..3 {
            assert!((core[k] - first[k]).abs() < 1e-6);
        }
        // one-sided θ-derivatives across each spike junction
        for pair in leaf.spikes().windows(2) {
            let (a, b) = (&pair[0].spline, &pair[1].spline);
            let (l, r) = (a.eval(a.x1 - 1e-9), b.eval(b.x0 + 1e-9));
            for k in 0..3 {
                assert!((l[k] - r[k]).abs() < 1e-6 * (1.0 + l[k].abs()), "{k}: {l:?} {r:?}");
            }
        }
    }

    #[test]
    fn mirror_is_exact() {
        let leaf = tower_leaf();
        let t = 0.03;
        assert_eq!(leaf.eval(PI - t).unwrap(), leaf.eval(PI - (PI - t)).unwrap());
        assert!((leaf.eval(PI - t).unwrap() - leaf.eval(t).unwrap()).abs() < 1e-12);
        assert_eq!(leaf.curvature(PI - t).unwrap(), leaf.curvature(PI - (PI - t)).unwrap());
    }

    #[test]
    fn spikes_grow_toward_the_boundary() {
        let leaf = tower_leaf();
        let mut last = leaf.eval(0.1).unwrap();
        let tmin = leaf.theta_min();
        for i in 1..=2000 {
            let t = 0.1 - (0.1 - tmin) * i as f64 / 2000.0;
            let r = leaf.eval(t).unwrap();
            assert!(r >= last);
            last = r;
        }
    }

    #[test]
    fn pinch_holds_on_a_fine_grid() {
        let leaf = tower_leaf();
        let tmin = leaf.theta_min();
        for i in 0..=20000 {
            let t = tmin + (0.1 - tmin) * i as f64 / 20000.0;
            let k = leaf.curvature(t).unwrap();
            assert!((0.9..=1.1).contains(&k), "{t}: {k}");
        }
    }

    #[test]
    fn curvature_matches_half_plane_formula() {
        // independent route: central differences of the embedded curve
        let leaf = tower_leaf();
        let path = leaf.path();
        for t in [0.09, 0.07, 0.04, 0.03, 0.02, 0.015, 1.0, PI - 0.03] {
            let direct = leaf.curvature(t).unwrap();
            let fd = hyp_curvature(&path, FRAC_PI_2 - t, Derivatives::Central { arc_step: 1e-5 })
                .unwrap();
            let an = hyp_curvature(&path, FRAC_PI_2 - t, Derivatives::Analytic).unwrap();
            assert!((direct - an).abs() < 1e-9, "{t}: {direct} vs {an}");
            assert!((direct - fd).abs() < 1e-4, "{t}: {direct} vs {fd}");
        }
    }

    #[test]
    fn out_of_domain() {
        let leaf = tower_leaf();
        assert!(matches!(leaf.eval(0.001), Err(LeafError::OutOfDomain { .. })));
        assert!(leaf.eval(leaf.theta_min()).is_ok());
        assert!(leaf.eval(PI - leaf.theta_min()).is_ok());
        assert!(LeafCurve::horocycle(0.1).eval(1e-6).is_ok());
    }

    #[test]
    fn arc_length_examples() {
        let h = LeafCurve::horocycle(0.1);
        let l = h.arc_length(PI / 4.0, 3.0 * PI / 4.0).unwrap();
        assert!((l.log_value().exp() - 2.0).abs() < 1e-12);
        assert_eq!(h.arc_length(1.0, 1.0).unwrap().log_value(), f64::NEG_INFINITY);
        let leaf = tower_leaf();
        let rho_j = leaf.eval(0.1).unwrap();
        for n in 0..3 {
            let t = leaf.anchor_theta(n).unwrap();
            let l = leaf.arc_length(t, 0.1).unwrap().log_value().exp();
            assert!(l >= leaf.eval(t).unwrap() - rho_j);
            let chord = polar_distance(
                PolarPoint::new(t, leaf.eval(t).unwrap()).unwrap(),
                PolarPoint::new(0.1, rho_j).unwrap(),
            )
            .unwrap();
            assert!(l >= chord - 1e-9);
        }
    }

    #[test]
    fn arc_length_matches_polyline_limit() {
        // Chord sums over a fine partition approach the length from below.
        let leaf = tower_leaf();
        let (a, b) = (leaf.anchor_theta(1).unwrap(), 0.08);
        let exact = leaf.arc_length(a, b).unwrap().log_value().exp();
        let m = 20000;
        let mut chords = 0.0;
        let mut prev = PolarPoint::new(a, leaf.eval(a).unwrap()).unwrap();
        for i in 1..=m {
            let t = a + (b - a) * i as f64 / m as f64;
            let p = PolarPoint::new(t, leaf.eval(t).unwrap()).unwrap();
            chords += polar_distance(prev, p).unwrap();
            prev = p;
        }
        assert!(chords <= exact + 1e-9 && exact - chords < 1e-5 * exact, "{chords} {exact}");
    }

    #[test]
    fn larger_builds() {
        let mut p = ConstructionParams::default_h2();
        p.n_max = 4;
        p.samples_per_segment = 512;
        let leaf = build_h2_leaf(&p, &GrowthOracle::Tower).unwrap();
        assert_eq!(leaf.spikes().len(), 5);
        let leaf = build_h2_leaf(&p, &GrowthOracle::AckermannLog { m: 2 }).unwrap();
        assert_eq!(leaf.spikes()[4].log_radius, 11.0);
    }

    #[test]
    fn impossible_pinch_is_reported() {
        let mut p = ConstructionParams::default_h2();
        p.epsilon = 1e-4;
        p.samples_per_segment = 256;
        match build_h2_leaf(&p, &GrowthOracle::Tower) {
            Err(ConstructionError::PinchInfeasible { segment, worst_kappa, .. }) => {
                assert!(segment.starts_with("spike"));
                assert!((worst_kappa - 1.0).abs() > 1e-4);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn dilation_preserves_curvature(log_t in -60.0f64..60.0, t in 0.0125f64..0.5) {
            let leaf = tower_leaf();
            let d = leaf.dilated(log_t);
            prop_assert_eq!(d.curvature(t).unwrap(), leaf.curvature(t).unwrap());
            prop_assert!((d.eval(t).unwrap() - leaf.eval(t).unwrap() - log_t).abs() < 1e-12 * (1.0 + log_t.abs()));
        }
    }
}
