use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;
use std::path::Path;

use super::config::{Emit, RunConfig};
use super::{Failure, EXIT_ANALYSIS, EXIT_CHECK_FAILED, EXIT_INFEASIBLE, EXIT_OK, EXIT_VALIDATION};
use crate::analysis::{
    basepoint_monotonicity, curvature_scan, distortion_profile, exponential_bound_check, generic_profile,
    leaf_self_intersection, self_intersection, write_csv, AnalysisError, CurveSpan, DistortionProfile,
    ExpBoundVerdict, IntersectionReport, MonotonicityVerdict, SamplingPlan, ScanTarget,
};
use crate::curves::{EuclideanCircle, FigureEight, GeodesicArc, HorizontalLine, LoopedSpiral};
use crate::hgeom::{Derivatives, LogScalar, PlaneCurve};
use crate::leafgen::{
    build_e2_leaf, build_h2_leaf, ConstructionError, ConstructionParams, Geometry, Leaf, LeafCurve,
};
use crate::scan::Extrema;
use crate::svg::render_svg;

/// Symmetric pairs used for a bare horocycle when no angles are given.
const HOROCYCLE_PAIRS: usize = 6;
const NAMED_SAMPLES: usize = 1000;
const NAMED_INTERSECT_SAMPLES: usize = 4001;
const LEAF_INTERSECT_SAMPLES: usize = 256;
const PROFILE_POINTS: usize = 64;

/// Plain decimals, switching to exponent form for very small values.
fn num(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-4 {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn analysis(e: AnalysisError) -> Failure {
    Failure::new(EXIT_ANALYSIS, e.to_string())
}

fn io(e: std::io::Error, what: &Path) -> Failure {
    Failure::new(EXIT_VALIDATION, format!("{}: {e}", what.display()))
}

fn say(out: &mut dyn Write, text: std::fmt::Arguments<'_>) -> Result<(), Failure> {
    out.write_fmt(text)
        .and_then(|_| out.write_all(b"\n"))
        .map_err(|e| Failure::new(EXIT_ANALYSIS, format!("writing report: {e}")))
}

macro_rules! say {
    ($out:expr, $($t:tt)*) => { say($out, format_args!($($t)*))? };
}

fn construct(run: &RunConfig) -> Result<Leaf, ConstructionError> {
    match (run.geometry, &run.oracle) {
        (Geometry::H2, None) => Ok(Leaf::H2(LeafCurve::from_parts(
            ConstructionParams { n_max: 0, ..run.params },
            None,
            Vec::new(),
            0.0,
        ))),
        (Geometry::H2, Some(o)) => build_h2_leaf(&run.params, o).map(Leaf::H2),
        (Geometry::E2, Some(o)) => build_e2_leaf(&run.params, o).map(Leaf::E2),
        (Geometry::E2, None) => unreachable!("rejected while resolving the config"),
    }
}

/// Symmetric pairs at every anchor up to `n_cap`, or at `δ/2ⁿ` on a bare
/// horocycle.
fn default_plan(leaf: &Leaf, n_cap: Option<usize>) -> SamplingPlan {
    match leaf {
        Leaf::H2(l) if l.is_pure_horocycle() => {
            let last = n_cap.unwrap_or(HOROCYCLE_PAIRS - 1);
            let d = l.params().delta;
            SamplingPlan::Angles((0..=last).map(|n| d / 2f64.powi(n as i32)).collect())
        }
        _ => match n_cap {
            Some(n) => SamplingPlan::Anchors((0..=n).collect()),
            None => SamplingPlan::all_anchors(leaf),
        },
    }
}

fn profile(leaf: &Leaf, plan: &SamplingPlan) -> Result<DistortionProfile, Failure> {
    let mut p = distortion_profile(leaf, plan).map_err(analysis)?;
    if let (Leaf::H2(l), SamplingPlan::Angles(ts)) = (leaf, plan) {
        let d = l.params().delta;
        if l.is_pure_horocycle() && ts.iter().enumerate().all(|(n, &t)| t == d / 2f64.powi(n as i32)) {
            // sorted by distance, so by n
            for (n, s) in p.samples.iter_mut().enumerate() {
                s.n = Some(n);
            }
        }
    }
    Ok(p)
}

fn title(leaf: &Leaf) -> String {
    format!(
        "distortion lower bound: {} leaf, oracle {}",
        leaf.geometry().name(),
        leaf.oracle().map_or("none".to_string(), |o| o.to_string())
    )
}

fn write_outputs(
    leaf: &Leaf,
    prof: Option<&DistortionProfile>,
    dir: &Path,
    emit: &BTreeSet<Emit>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    if emit.is_empty() {
        return Ok(());
    }
    std::fs::create_dir_all(dir).map_err(|e| io(e, dir))?;
    let mut files: Vec<(&str, String)> = Vec::new();
    if emit.contains(&Emit::Leaf) {
        files.push(("leaf.txt", leaf.to_text()));
    }
    if let Some(p) = prof {
        if emit.contains(&Emit::Csv) {
            files.push(("distortion.csv", write_csv(p)));
        }
        if emit.contains(&Emit::Svg) {
            files.push(("distortion.svg", render_svg(p, &title(leaf))));
        }
    }
    for (name, text) in files {
        let path = dir.join(name);
        std::fs::write(&path, text).map_err(|e| io(e, &path))?;
        say!(out, "wrote {}", path.display());
    }
    Ok(())
}

fn segment_count(leaf: &Leaf) -> usize {
    match leaf {
        Leaf::H2(l) => 1 + 2 * l.spikes().len(),
        Leaf::E2(l) => 1 + 2 * (1 + l.spikes().len()),
    }
}

pub(super) fn build(run: &RunConfig, out: &mut dyn Write) -> Result<i32, Failure> {
    let leaf = construct(run).map_err(|e| {
        let code = if e.is_validation() { EXIT_VALIDATION } else { EXIT_INFEASIBLE };
        Failure::new(code, e.to_string())
    })?;
    let p = leaf.params();
    let k = curvature_scan(ScanTarget::from(&leaf), p.samples_per_segment).map_err(analysis)?;
    say!(out, "geometry {}", leaf.geometry().name());
    say!(out, "oracle {}", leaf.oracle().map_or("none".to_string(), |o| o.to_string()));
    say!(
        out,
        "delta {} epsilon {} n_max {} samples_per_segment {}",
        p.delta,
        p.epsilon,
        p.n_max,
        p.samples_per_segment
    );
    say!(out, "segments {}", segment_count(&leaf));
    say!(out, "kappa min {} at {}", num(k.min), k.argmin);
    say!(out, "kappa max {} at {}", num(k.max), k.argmax);
    let mut big = Vec::new();
    match &leaf {
        Leaf::H2(l) => {
            say!(out, "anchors (n theta ln_r):");
            for (n, s) in l.spikes().iter().enumerate() {
                say!(out, "  {n} {} {}", s.theta_lo, s.log_radius);
                if s.log_radius > LogScalar::EXP_LIMIT {
                    big.push(n);
                }
            }
        }
        Leaf::E2(l) => {
            say!(out, "bend width {}", l.bend_width());
            say!(out, "anchors (n x ln_r):");
            for (n, s) in l.spikes().iter().enumerate() {
                say!(out, "  {n} {} {}", s.spline.x1, s.log_radius);
                if s.log_radius > LogScalar::EXP_LIMIT {
                    big.push(n);
                }
            }
        }
    }
    if big.is_empty() {
        say!(out, "saturation none");
    } else {
        say!(out, "saturation r_n beyond f64 range for n in {big:?}; carried as logarithms");
    }
    if let Some(o) = leaf.oracle() {
        if let Ok(v) = o.log_radius(p.n_max + 1) {
            if v.is_saturated() {
                say!(out, "note ln r_{} saturates: n_max is at the representable limit", p.n_max + 1);
            }
        }
    }
    let prof = if run.emit.contains(&Emit::Csv) || run.emit.contains(&Emit::Svg) {
        Some(profile(&leaf, &default_plan(&leaf, None))?)
    } else {
        None
    };
    write_outputs(&leaf, prof.as_ref(), &run.out_dir, &run.emit, out)?;
    Ok(EXIT_OK)
}

fn read_leaf(path: &Path) -> Result<Leaf, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io(e, path))?;
    Leaf::parse(&text).map_err(|e| Failure::new(EXIT_VALIDATION, format!("{}: {e}", path.display())))
}

fn parse_list(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .map(|w| {
            w.parse()
                .map_err(|_| Failure::new(EXIT_VALIDATION, format!("--theta: '{w}' is not a number")))
        })
        .collect()
}

pub(super) fn distortion(
    leaf_path: &Path,
    theta: Option<&str>,
    n_cap: Option<usize>,
    dir: &Path,
    emit: &BTreeSet<Emit>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let leaf = read_leaf(leaf_path)?;
    let plan = match theta {
        Some(s) => SamplingPlan::Angles(parse_list(s)?),
        None => default_plan(&leaf, n_cap),
    };
    let prof = profile(&leaf, &plan)?;
    let saturated = prof.samples.iter().filter(|s| s.d_leaf.is_saturated()).count();
    say!(out, "{}", prof.provenance);
    say!(out, "samples {} (a lower bound for the distortion function)", prof.samples.len());
    say!(out, "saturated {saturated}");
    let emit: BTreeSet<Emit> = emit.iter().copied().filter(|e| *e != Emit::Leaf).collect();
    write_outputs(&leaf, Some(&prof), dir, &emit, out)?;
    Ok(EXIT_OK)
}

struct Named {
    curve: Box<dyn PlaneCurve>,
    s0: f64,
    s1: f64,
    closed: bool,
}

impl Named {
    fn span(&self) -> CurveSpan<'_> {
        CurveSpan { curve: self.curve.as_ref(), s0: self.s0, s1: self.s1, closed: self.closed }
    }
}

pub const NAMED_CURVES: [&str; 5] = ["horocycle", "hyperbolic-circle", "geodesic", "figure-eight", "spiral"];

fn named(name: &str) -> Option<Named> {
    let tau = 2.0 * PI;
    Some(match name {
        "horocycle" => Named { curve: Box::new(HorizontalLine { height: 1.0 }), s0: -10.0, s1: 10.0, closed: false },
        "hyperbolic-circle" => Named {
            curve: Box::new(EuclideanCircle { center: [0.0, 2.0], radius: 1.0 }),
            s0: 0.0,
            s1: tau,
            closed: true,
        },
        "geodesic" => Named { curve: Box::new(GeodesicArc { radius: 1.0 }), s0: 0.1, s1: PI - 0.1, closed: false },
        "figure-eight" => Named {
            curve: Box::new(FigureEight { center: [0.0, 3.0], scale: 1.0 }),
            s0: 0.0,
            s1: tau,
            closed: true,
        },
        "spiral" => Named {
            curve: Box::new(LoopedSpiral { center: [0.0, 4.0], inner: 0.5, outer: 1.0 }),
            s0: 0.0,
            s1: tau,
            closed: true,
        },
        _ => return None,
    })
}

enum Target {
    Leaf(Leaf),
    Curve(Named),
}

enum Verdict {
    Pass(String),
    Fail(String),
    Inapplicable(String),
}

fn report_extrema(out: &mut dyn Write, k: &Extrema) -> Result<(), Failure> {
    say!(out, "kappa min {} at {}", num(k.min), k.argmin);
    say!(out, "kappa max {} at {}", num(k.max), k.argmax);
    Ok(())
}

fn check_curvature(target: &Target, samples: Option<usize>, out: &mut dyn Write) -> Result<Verdict, Failure> {
    Ok(match target {
        Target::Leaf(leaf) => {
            let p = leaf.params();
            let k = curvature_scan(ScanTarget::from(leaf), samples.unwrap_or(p.samples_per_segment))
                .map_err(analysis)?;
            report_extrema(out, &k)?;
            let (lo, hi, what) = match leaf {
                Leaf::H2(_) => (1.0 - p.epsilon, 1.0 + p.epsilon, "kappa"),
                Leaf::E2(_) => (-p.epsilon, p.epsilon, "euclidean kappa"),
            };
            if k.min >= lo && k.max <= hi {
                Verdict::Pass(format!("{what} within [{lo}, {hi}]"))
            } else {
                Verdict::Fail(format!("{what} leaves [{lo}, {hi}]"))
            }
        }
        Target::Curve(c) => {
            let k = curvature_scan(ScanTarget::Curve(c.span()), samples.unwrap_or(NAMED_SAMPLES)).map_err(analysis)?;
            report_extrema(out, &k)?;
            Verdict::Pass("curvature evaluated".into())
        }
    })
}

fn leaf_kappa_range(l: &LeafCurve, samples: Option<usize>) -> Result<Extrema, Failure> {
    curvature_scan(ScanTarget::H2(l), samples.unwrap_or(l.params().samples_per_segment)).map_err(analysis)
}

fn check_monotone(target: &Target, samples: Option<usize>, out: &mut dyn Write) -> Result<Verdict, Failure> {
    let (span, n) = match target {
        Target::Leaf(Leaf::E2(_)) => {
            return Ok(Verdict::Inapplicable("osculating horocycles belong to the hyperbolic plane".into()))
        }
        Target::Leaf(Leaf::H2(l)) => {
            let k = leaf_kappa_range(l, samples)?;
            if k.min < 1.0 - 1e-6 {
                return Ok(Verdict::Inapplicable(format!("κ falls below 1 (min {})", k.min)));
            }
            let path = l.path();
            let d = l.params().delta;
            let r = basepoint_monotonicity(
                CurveSpan { curve: &path, s0: FRAC_PI_2 - (PI - d), s1: FRAC_PI_2 - d, closed: false },
                samples.unwrap_or(NAMED_SAMPLES),
                Derivatives::Analytic,
            )
            .map_err(analysis)?;
            return monotone_verdict(r, out);
        }
        Target::Curve(c) => (c.span(), samples.unwrap_or(NAMED_SAMPLES)),
    };
    let r = basepoint_monotonicity(span, n, Derivatives::Analytic).map_err(analysis)?;
    monotone_verdict(r, out)
}

fn monotone_verdict(r: crate::analysis::MonotonicityReport, out: &mut dyn Write) -> Result<Verdict, Failure> {
    say!(out, "samples {}", r.samples);
    say!(out, "kappa min {}", num(r.min_kappa));
    say!(out, "winding {}", num(r.winding));
    Ok(match r.verdict {
        MonotonicityVerdict::MonotoneAnticlockwise { strict: true } => {
            Verdict::Pass("basepoint moves strictly anticlockwise".into())
        }
        MonotonicityVerdict::MonotoneAnticlockwise { strict: false } => {
            Verdict::Pass("basepoint never moves clockwise".into())
        }
        MonotonicityVerdict::Violation { index, s, step } => {
            Verdict::Fail(format!("basepoint step {step} after sample {index} (s = {s})"))
        }
        MonotonicityVerdict::Inapplicable { reason } => Verdict::Inapplicable(reason),
    })
}

fn check_intersect(
    target: &Target,
    samples: Option<usize>,
    tol: f64,
    out: &mut dyn Write,
) -> Result<Verdict, Failure> {
    let r: IntersectionReport = match target {
        Target::Leaf(leaf) => {
            leaf_self_intersection(leaf, samples.unwrap_or(LEAF_INTERSECT_SAMPLES), tol).map_err(analysis)?
        }
        Target::Curve(c) => {
            self_intersection(c.span(), samples.unwrap_or(NAMED_INTERSECT_SAMPLES), tol).map_err(analysis)?
        }
    };
    say!(out, "segments {}", r.segments);
    Ok(match (r.params, r.point) {
        (Some((s, t)), Some(p)) => {
            if let Some(res) = r.residual {
                say!(out, "residual {}", num(res));
            }
            Verdict::Pass(format!("crossing at s = {s}, s' = {t}, point ({}, {})", num(p[0]), num(p[1])))
        }
        _ => Verdict::Pass("none found".into()),
    })
}

fn check_expbound(target: &Target, samples: Option<usize>, out: &mut dyn Write) -> Result<Verdict, Failure> {
    let (prof, k) = match target {
        Target::Leaf(Leaf::E2(_)) => {
            return Ok(Verdict::Inapplicable("the exponential bound is a hyperbolic statement".into()))
        }
        Target::Leaf(leaf @ Leaf::H2(l)) => {
            let k = leaf_kappa_range(l, samples)?;
            (profile(leaf, &default_plan(leaf, None))?, k)
        }
        Target::Curve(c) => {
            let k = curvature_scan(ScanTarget::Curve(c.span()), samples.unwrap_or(NAMED_SAMPLES)).map_err(analysis)?;
            (generic_profile(c.span(), PROFILE_POINTS).map_err(analysis)?, k)
        }
    };
    report_extrema(out, &k)?;
    let r = exponential_bound_check(&prof, (k.min, k.max));
    say!(out, "samples {} checked, {} saturated skipped", r.checked, r.saturated_skipped);
    say!(out, "worst log margin {}", r.worst_log_margin);
    if let Some(c) = r.fitted_prefactor {
        say!(out, "fitted prefactor {c}");
    }
    Ok(match r.verdict {
        ExpBoundVerdict::Holds => Verdict::Pass("d_leaf <= 2 sinh(d_ambient/2) on every sample".into()),
        ExpBoundVerdict::Violated { index } => {
            let s = &prof.samples[index];
            Verdict::Fail(format!("sample at d_ambient {} exceeds the bound", s.d_ambient))
        }
        ExpBoundVerdict::Inapplicable { reason } => Verdict::Inapplicable(reason),
    })
}

pub(super) fn check(
    target: &str,
    name: &str,
    samples: Option<usize>,
    tol: f64,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    const CHECKS: [&str; 4] = ["curvature", "monotone", "intersect", "expbound"];
    if !CHECKS.contains(&name) {
        return Err(Failure::new(
            EXIT_VALIDATION,
            format!("unknown check '{name}' (expected one of {})", CHECKS.join(", ")),
        ));
    }
    let t = match named(target) {
        Some(c) => Target::Curve(c),
        None if Path::new(target).exists() => Target::Leaf(read_leaf(Path::new(target))?),
        None => {
            return Err(Failure::new(
                EXIT_VALIDATION,
                format!("'{target}' is neither a leaf file nor one of {}", NAMED_CURVES.join(", ")),
            ))
        }
    };
    say!(out, "check {name} on {target}");
    let v = match name {
        "curvature" => check_curvature(&t, samples, out)?,
        "monotone" => check_monotone(&t, samples, out)?,
        "intersect" => check_intersect(&t, samples, tol, out)?,
        _ => check_expbound(&t, samples, out)?,
    };
    Ok(match v {
        Verdict::Pass(m) => {
            say!(out, "verdict: pass: {m}");
            EXIT_OK
        }
        Verdict::Inapplicable(m) => {
            say!(out, "verdict: inapplicable: {m}");
            EXIT_OK
        }
        Verdict::Fail(m) => {
            say!(out, "verdict: fail: {m}");
            EXIT_CHECK_FAILED
        }
    })
}
