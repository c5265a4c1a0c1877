//! The Euclidean leaf: an even graph, `δx²` for `|x| ≤ K`, then a bend,
//! then spikes through the anchor heights.
//!
//! Layout on `x ≥ 0`: parabola on `[0, K]`, a quintic bend in `y` on
//! `[K, K + W]`, and spike `n` on `[K + W + n, K + W + n + 1]` as a quintic
//! in `Y = ln y`. The bend width `W` is the smallest integer for which the
//! shaping search meets the bound. Anchor `n` sits at the right end of
//! spike `n` with `Y = ln y_B + ln r_n`, `y_B` being the height at the end
//! of the bend.

use super::hermite::Quintic;
use super::shaping::{descend, Problem, SEARCH_SAMPLES};
use super::{anchor_logs, ConstructionError, ConstructionParams, Geometry, LeafError};
use crate::egeom::{arc_excess, graph_arc_length, graph_curvature, GraphFunction, Height, Parabola};
use crate::growth::GrowthOracle;
use crate::hgeom::{Derivatives, GeomError, LogScalar};
use crate::quad::{integrate, QuadSettings};
use crate::scan::scan_interval;

/// Bend widths tried, smallest first.
pub const BEND_WIDTHS: std::ops::RangeInclusive<u32> = 1..=16;

#[derive(Clone, Debug, PartialEq)]
pub struct E2Spike {
    pub n: usize,
    /// `ln y(x)` on `[x0, x1]`.
    pub spline: Quintic,
    pub log_radius: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct E2Leaf {
    params: ConstructionParams,
    oracle: Option<GrowthOracle>,
    bend: Quintic,
    spikes: Vec<E2Spike>,
    offset: f64,
}

struct QuinticGraph<'a>(&'a Quintic);

impl GraphFunction for QuinticGraph<'_> {
    fn value(&self, x: f64) -> f64 {
        self.0.eval(x)[0]
    }

    fn jet(&self, x: f64) -> Option<(f64, f64, f64)> {
        let [a, b, c] = self.0.eval(x);
        Some((a, b, c))
    }
}

fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Curvature of the graph `y = e^Y` from `(Y, Y', Y'')`, without forming
/// `e^Y` when it would overflow.
pub(crate) fn kappa_log(y: f64, d1: f64, d2: f64) -> f64 {
    // κ = e^Y (Y'' + Y'²) / (1 + e^{2Y} Y'²)^{3/2}
    let a = y + d1.abs().ln();
    (d2 + d1 * d1) * (y - 1.5 * softplus(2.0 * a)).exp()
}

/// `ln |e^a − e^b|`.
fn ln_abs_diff(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == lo {
        return f64::NEG_INFINITY;
    }
    hi + (-(lo - hi).exp_m1()).ln()
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Region<'a> {
    Parabola,
    Bend,
    Spike(&'a E2Spike),
}

impl E2Leaf {
    pub(crate) fn from_parts(
        params: ConstructionParams,
        oracle: Option<GrowthOracle>,
        bend: Quintic,
        spikes: Vec<E2Spike>,
        offset: f64,
    ) -> Self {
        E2Leaf {
            params,
            oracle,
            bend,
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

    pub fn bend(&self) -> &Quintic {
        &self.bend
    }

    pub fn spikes(&self) -> &[E2Spike] {
        &self.spikes
    }

    /// Vertical translation `c` applied to the base leaf.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn bend_width(&self) -> f64 {
        self.bend.width()
    }

    /// The graph is defined on `[−x_max, x_max]`.
    pub fn x_max(&self) -> f64 {
        self.spikes.last().map_or(self.bend.x1, |s| s.spline.x1)
    }

    pub fn anchor_x(&self, n: usize) -> Option<f64> {
        self.spikes.get(n).map(|s| s.spline.x1)
    }

    /// Stored `ln φ` at anchor `n` of the base leaf.
    pub fn anchor_log_height(&self, n: usize) -> Option<f64> {
        self.spikes.get(n).map(|s| s.spline.right[0])
    }

    pub fn translated(&self, c: f64) -> E2Leaf {
        E2Leaf {
            offset: self.offset + c,
            ..self.clone()
        }
    }

    fn region(&self, x: f64) -> Result<(f64, Region<'_>), LeafError> {
        let ax = x.abs();
        let max = self.x_max();
        if !(ax <= max) {
            return Err(LeafError::OutOfDomain {
                value: x,
                min: -max,
                max,
            });
        }
        let r = if ax <= self.params.k_width {
            Region::Parabola
        } else if ax <= self.bend.x1 {
            Region::Bend
        } else {
            let s = self
                .spikes
                .iter()
                .find(|s| ax <= s.spline.x1)
                .expect("within x_max");
            Region::Spike(s)
        };
        Ok((ax, r))
    }

    /// `ln φ(x)` of the base leaf (`−inf` at the vertex).
    pub fn base_log_height(&self, x: f64) -> Result<f64, LeafError> {
        let (ax, r) = self.region(x)?;
        Ok(match r {
            Region::Parabola => (self.params.delta * ax * ax).ln(),
            Region::Bend => self.bend.eval(ax)[0].ln(),
            Region::Spike(s) => s.spline.eval(ax)[0],
        })
    }

    /// Height `φ(x) + c` of the leaf. Beyond `f64` range it is returned in
    /// log form, where the offset is negligible.
    pub fn height(&self, x: f64) -> Result<Height, LeafError> {
        let ly = self.base_log_height(x)?;
        if ly <= LogScalar::EXP_LIMIT {
            Ok(Height::Plain(ly.exp() + self.offset))
        } else {
            Ok(Height::Log(LogScalar::from_log(ly)))
        }
    }

    /// Plain height; fails as saturated beyond `f64` range.
    pub fn value(&self, x: f64) -> Result<f64, LeafError> {
        self.height(x)?
            .to_f64()
            .ok_or(LeafError::Geom(GeomError::Saturated))
    }

    /// Signed Euclidean curvature of the graph at `x`.
    pub fn curvature(&self, x: f64) -> Result<f64, LeafError> {
        let (ax, r) = self.region(x)?;
        Ok(match r {
            Region::Parabola => graph_curvature(2.0 * self.params.delta * ax, 2.0 * self.params.delta),
            Region::Bend => {
                let [_, d1, d2] = self.bend.eval(ax);
                graph_curvature(d1, d2)
            }
            Region::Spike(s) => {
                let [y, d1, d2] = s.spline.eval(ax);
                kappa_log(y, d1, d2)
            }
        })
    }

    /// Junctions inside `(−x_max, x_max)`, ascending.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut right = vec![self.params.k_width, self.bend.x1];
        right.extend(self.spikes.iter().map(|s| s.spline.x1));
        right.pop();
        let mut all: Vec<f64> = right.iter().rev().map(|x| -x).collect();
        all.push(0.0);
        all.extend(right);
        all
    }

    /// Length of the graph over `[a, b]`.
    pub fn arc_length(&self, a: f64, b: f64) -> Result<LogScalar, LeafError> {
        if b < a {
            return Err(LeafError::Reversed { a, b });
        }
        self.region(a)?;
        self.region(b)?;
        let mut cuts = vec![a];
        cuts.extend(self.breakpoints().into_iter().filter(|&t| t > a && t < b));
        cuts.push(b);
        let mut total = LogScalar::from_value(0.0);
        for pair in cuts.windows(2) {
            total = total.add(self.piece_length(pair[0], pair[1])?);
        }
        Ok(total)
    }

    fn piece_length(&self, u: f64, v: f64) -> Result<LogScalar, LeafError> {
        if u == v {
            return Ok(LogScalar::from_value(0.0));
        }
        let (u, v) = if u + v < 0.0 { (-v, -u) } else { (u, v) };
        let (_, r) = self.region(0.5 * (u + v))?;
        let exact = Derivatives::Analytic;
        Ok(match r {
            Region::Parabola => {
                let p = Parabola {
                    delta: self.params.delta,
                };
                LogScalar::from_value(graph_arc_length(&p, u, v, exact)?)
            }
            Region::Bend => {
                LogScalar::from_value(graph_arc_length(&QuinticGraph(&self.bend), u, v, exact)?)
            }
            Region::Spike(s) => spike_length(&s.spline, u, v)?,
        })
    }

    /// The leaf as a plane curve `x ↦ (x, φ(x) + c)`.
    pub fn path(&self) -> E2Path<'_> {
        E2Path { leaf: self }
    }
}

/// Length of `y = e^{Y(x)}` over `[u, v]`, as the exact rise plus the
/// bounded excess when `Y` is monotone.
fn spike_length(q: &Quintic, u: f64, v: f64) -> Result<LogScalar, LeafError> {
    let settings = QuadSettings::default();
    let probes = 64;
    let monotone = (0..=probes).all(|i| q.eval(u + (v - u) * i as f64 / probes as f64)[1] >= 0.0);
    if monotone {
        let slope = |x: f64| {
            let [y, d1, _] = q.eval(x);
            (y + d1.ln()).exp()
        };
        let excess = integrate(|x| arc_excess(slope(x)), u, v, settings)?.value;
        let rise = LogScalar::from_log(ln_abs_diff(q.eval(v)[0], q.eval(u)[0]));
        return Ok(rise.add(LogScalar::from_value(excess)));
    }
    let speed = |x: f64| {
        let [y, d1, _] = q.eval(x);
        (y.exp() * d1).hypot(1.0)
    };
    Ok(LogScalar::from_value(integrate(speed, u, v, settings)?.value))
}

/// See [`E2Leaf::path`].
#[derive(Clone, Copy, Debug)]
pub struct E2Path<'a> {
    leaf: &'a E2Leaf,
}

impl crate::hgeom::PlaneCurve for E2Path<'_> {
    fn point(&self, s: f64) -> [f64; 2] {
        [s, self.leaf.value(s).unwrap_or(f64::NAN)]
    }
}

/// Builds the E² leaf for `params` and the anchor radii of `oracle`.
pub fn build_e2_leaf(
    params: &ConstructionParams,
    oracle: &GrowthOracle,
) -> Result<E2Leaf, ConstructionError> {
    params.validate(Geometry::E2)?;
    let logs = anchor_logs(oracle, params.n_max)?;
    let mut best: Option<ConstructionError> = None;
    for w in BEND_WIDTHS {
        match try_bend(params, oracle, &logs, w as f64) {
            Ok(leaf) => return Ok(leaf),
            Err(e) => {
                let better = match (&best, &e) {
                    (
                        Some(ConstructionError::PinchInfeasible { worst_kappa: a, .. }),
                        ConstructionError::PinchInfeasible { worst_kappa: b, .. },
                    ) => b.abs() < a.abs(),
                    (None, _) => true,
                    _ => false,
                };
                if better {
                    best = Some(e);
                }
            }
        }
    }
    Err(best.expect("at least one bend width tried"))
}

fn try_bend(
    params: &ConstructionParams,
    oracle: &GrowthOracle,
    logs: &[f64],
    width: f64,
) -> Result<E2Leaf, ConstructionError> {
    let (delta, k) = (params.delta, params.k_width);
    let n_spikes = logs.len();
    let n_seg = n_spikes + 1;
    let start = [delta * k * k, 2.0 * delta * k, 2.0 * delta];

    // x = [y_B, y'_B, y''_B, Y'_0, Y''_0, ..., Y'_n, Y''_n]
    let mut x = vec![start[0] + 2.0 * width, 8.0, 0.0];
    let secant: Vec<f64> = (0..n_spikes)
        .map(|n| if n == 0 { logs[0] } else { logs[n] - logs[n - 1] })
        .collect();
    for n in 0..n_spikes {
        let s = if n + 1 < n_spikes {
            let (a, b) = (secant[n], secant[n + 1]);
            2.0 * a * b / (a + b)
        } else {
            secant[n]
        };
        x.extend([s, 0.0]);
    }

    let bend_x1 = k + width;
    let bend = |x: &[f64]| Quintic {
        x0: k,
        x1: bend_x1,
        left: start,
        right: [x[0], x[1], x[2]],
    };
    let log_anchor = |x: &[f64], n: usize| -> [f64; 3] {
        [x[0].ln() + logs[n], x[3 + 2 * n], x[4 + 2 * n]]
    };
    let spike = |x: &[f64], n: usize| {
        let left = if n == 0 {
            let (y, s, p) = (x[0], x[1], x[2]);
            [y.ln(), s / y, p / y - (s / y) * (s / y)]
        } else {
            log_anchor(x, n - 1)
        };
        let x0 = bend_x1 + n as f64;
        Quintic {
            x0,
            x1: x0 + 1.0,
            left,
            right: log_anchor(x, n),
        }
    };
    // segment 0 is the bend, segment n + 1 is spike n
    let cost = |x: &[f64], seg: usize| -> f64 {
        let (q, log_form) = if seg == 0 {
            (bend(x), false)
        } else {
            (spike(x, seg - 1), true)
        };
        let h = q.width() / (SEARCH_SAMPLES - 1) as f64;
        let mut worst = 0.0f64;
        for i in 0..SEARCH_SAMPLES {
            let [y, d1, d2] = q.eval(q.x0 + h * i as f64);
            if d1 < 0.0 || (!log_form && y <= 0.0) {
                return f64::INFINITY;
            }
            let kappa = if log_form {
                kappa_log(y, d1, d2)
            } else {
                graph_curvature(d1, d2)
            };
            worst = worst.max(kappa.abs());
        }
        if worst.is_nan() {
            f64::INFINITY
        } else {
            worst
        }
    };
    let affects = |j: usize| -> Vec<usize> {
        match j {
            0 => (0..n_seg).collect(),
            1 | 2 => vec![0, 1],
            _ => {
                let n = (j - 3) / 2;
                if n + 1 < n_spikes {
                    vec![n + 1, n + 2]
                } else {
                    vec![n + 1]
                }
            }
        }
    };
    let positive = |j: usize| j <= 1;
    let problem = Problem {
        n_segments: n_seg,
        affects: &affects,
        cost: &cost,
        positive: &positive,
    };
    descend(&problem, &mut x, 0.95 * params.epsilon);

    let eps = params.epsilon;
    let samples = params.samples_per_segment;
    let check = |name: String, q: &Quintic, log_form: bool| -> Result<(), ConstructionError> {
        let slope = scan_interval(|s| Ok::<_, ConstructionError>(q.eval(s)[1]), q.x0, q.x1, samples)?;
        if slope.min < 0.0 {
            return Err(ConstructionError::NotMonotone {
                segment: name,
                at: slope.argmin,
            });
        }
        let ext = scan_interval(
            |s| {
                let [y, d1, d2] = q.eval(s);
                Ok::<_, ConstructionError>(if log_form {
                    kappa_log(y, d1, d2)
                } else {
                    graph_curvature(d1, d2)
                })
            },
            q.x0,
            q.x1,
            samples,
        )?;
        let worst = if ext.max.abs() >= ext.min.abs() { ext.max } else { ext.min };
        if !(worst.abs() <= eps) {
            return Err(ConstructionError::PinchInfeasible {
                segment: name,
                worst_kappa: worst,
                bound: format!("[{}, {}]", -eps, eps),
            });
        }
        Ok(())
    };
    let b = bend(&x);
    check("bend".into(), &b, false)?;
    let mut spikes = Vec::with_capacity(n_spikes);
    for n in 0..n_spikes {
        let q = spike(&x, n);
        check(format!("spike {n}"), &q, true)?;
        spikes.push(E2Spike {
            n,
            spline: q,
            log_radius: logs[n],
        });
    }
    Ok(E2Leaf {
        params: *params,
        oracle: Some(oracle.clone()),
        bend: b,
        spikes,
        offset: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::egeom::{euc_curvature_graph, FnGraph};
    use std::sync::OnceLock;

    fn tower_leaf() -> &'static E2Leaf {
        static LEAF: OnceLock<E2Leaf> = OnceLock::new();
        LEAF.get_or_init(|| {
            build_e2_leaf(&ConstructionParams::default_e2(), &GrowthOracle::Tower).unwrap()
        })
    }

    #[test]
    fn parabola_core_is_exact() {
        let leaf = tower_leaf();
        assert_eq!(leaf.curvature(0.0).unwrap(), 0.1);
        for x in [-9.5, -3.0, 0.5, 7.25, 10.0] {
            assert_eq!(leaf.value(x).unwrap(), (0.05 * x * x).ln().exp());
            assert!((leaf.value(x).unwrap() - 0.05 * x * x).abs() < 1e-12 * (1.0 + x * x));
        }
    }

    #[test]
    fn anchors_in_log_form() {
        let leaf = tower_leaf();
        let yb = leaf.bend().right[0];
        for (n, ln_r) in [1.0, 2.0, 4.0, 16.0].iter().enumerate() {
            let x = leaf.anchor_x(n).unwrap();
            assert_eq!(x, 10.0 + leaf.bend_width() + n as f64 + 1.0);
            assert_eq!(leaf.base_log_height(x).unwrap(), yb.ln() + ln_r);
            assert_eq!(leaf.base_log_height(-x).unwrap(), yb.ln() + ln_r);
        }
    }

    #[test]
    fn curvature_bound_on_fine_grid() {
        let leaf = tower_leaf();
        let xm = leaf.x_max();
        for i in 0..=40000 {
            let x = -xm + 2.0 * xm * i as f64 / 40000.0;
            let k = leaf.curvature(x).unwrap();
            assert!(k.abs() <= 0.1, "{x}: {k}");
        }
    }

    #[test]
    fn curvature_matches_finite_differences() {
        let leaf = tower_leaf();
        let g = FnGraph(|x: f64| leaf.value(x).unwrap());
        let xs = [leaf.bend().x0 + 0.5, leaf.bend().x1 + 0.3, leaf.anchor_x(1).unwrap() + 0.5];
        for x in xs {
            let fd = euc_curvature_graph(&g, x, Derivatives::Central { arc_step: 1e-4 }).unwrap();
            assert!((fd - leaf.curvature(x).unwrap()).abs() < 1e-5, "{x}");
        }
    }

    #[test]
    fn junctions_are_c2() {
        let leaf = tower_leaf();
        let b = leaf.bend();
        let k = leaf.params().k_width;
        let par = [0.05 * k * k, 0.1 * k, 0.1];
        assert_eq!(b.left, par);
        // bend end in log form equals the first spike start
        let [y, s, p] = b.right;
        let first = leaf.spikes()[0].spline.left;
        assert!((first[0] - y.ln()).abs() < 1e-15);
        assert!((first[1] - s / y).abs() < 1e-15);
        assert!((first[2] - (p / y - (s / y).powi(2))).abs() < 1e-15);
        for w in leaf.spikes().windows(2) {
            assert_eq!(w[0].spline.right, w[1].spline.left);
        }
    }

    #[test]
    fn arc_length_dominates_rise_and_run() {
        let leaf = tower_leaf();
        for n in 0..4 {
            let x = leaf.anchor_x(n).unwrap();
            let l = leaf.arc_length(0.0, x).unwrap();
            let rise = leaf.base_log_height(x).unwrap();
            assert!(l.log_value() >= rise);
            assert!(l.log_value().exp() >= x);
            let sym = leaf.arc_length(-x, x).unwrap();
            assert!((sym.log_value() - l.log_value() - 2f64.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn translation_keeps_curvature() {
        let leaf = tower_leaf();
        let t = leaf.translated(-3.5);
        for x in [0.0, 4.0, 12.5, 15.9] {
            assert_eq!(t.curvature(x).unwrap(), leaf.curvature(x).unwrap());
            assert!((t.value(x).unwrap() - leaf.value(x).unwrap() + 3.5).abs() < 1e-9);
        }
    }

    #[test]
    fn log_curvature_is_stable_for_huge_heights() {
        assert_eq!(kappa_log(65536.0, 1e5, 0.0), 0.0);
        // y = e^Y: y' = y Y', y'' = y (Y'' + Y'²)
        let (y, y1, y2) = (1.5f64, 2.0, 4.0);
        let expect = graph_curvature(y * y1, y * (y2 + y1 * y1));
        assert!((kappa_log(y.ln(), y1, y2) - expect).abs() < 1e-15);
    }

    #[test]
    fn tower_to_four_stays_in_log_form() {
        let mut p = ConstructionParams::default_e2();
        p.n_max = 4;
        p.samples_per_segment = 512;
        let leaf = build_e2_leaf(&p, &GrowthOracle::Tower).unwrap();
        let x = leaf.anchor_x(4).unwrap();
        assert!(matches!(leaf.height(x).unwrap(), Height::Log(_)));
        let l = leaf.arc_length(0.0, x).unwrap();
        assert!(!l.is_saturated());
        assert!(l.log_value() > 65536.0);
    }
}
