//! Fixed-size SVG chart of a distortion profile.
//!
//! The ordinate is `ln d_leaf` on a linear axis, i.e. `d_leaf` on a log
//! scale; tick labels show the natural log. Saturated samples sit in a
//! band above the plot as open circles. Output depends only on the
//! profile, so equal profiles give identical bytes.

use std::fmt::Write as _;

use crate::analysis::DistortionProfile;

pub const WIDTH: u32 = 800;
pub const HEIGHT: u32 = 600;

const LEFT: f64 = 90.0;
const RIGHT: f64 = 770.0;
const TOP: f64 = 70.0;
const BOTTOM: f64 = 540.0;
const SAT_BAND: f64 = 45.0;
const TICKS: usize = 5;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn span(lo: f64, hi: f64) -> (f64, f64) {
    if !(hi > lo) {
        (lo - 1.0, lo + 1.0)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

pub fn render_svg(profile: &DistortionProfile, title: &str) -> String {
    let plotted: Vec<(f64, f64)> = profile
        .samples
        .iter()
        .filter(|s| !s.d_leaf.is_saturated() && s.d_leaf.log_value().is_finite())
        .map(|s| (s.d_ambient, s.d_leaf.log_value()))
        .collect();
    let saturated: Vec<f64> = profile
        .samples
        .iter()
        .filter(|s| s.d_leaf.is_saturated())
        .map(|s| s.d_ambient)
        .collect();

    let xs = plotted.iter().map(|p| p.0).chain(saturated.iter().copied());
    let (xlo, xhi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    let (xlo, xhi) = if xlo.is_finite() { span(xlo.min(0.0), xhi) } else { (0.0, 1.0) };
    let (ylo, yhi) = plotted
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.1), b.max(p.1)));
    let (ylo, yhi) = if ylo.is_finite() { span(ylo, yhi) } else { (0.0, 1.0) };
    let px = |x: f64| LEFT + (x - xlo) / (xhi - xlo) * (RIGHT - LEFT);
    let py = |y: f64| BOTTOM - (y - ylo) / (yhi - ylo) * (BOTTOM - TOP);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="400" y="28" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        escape(title)
    )
    .unwrap();
    writeln!(
        s,
        r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        RIGHT - LEFT,
        BOTTOM - TOP
    )
    .unwrap();
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let xv = xlo + f * (xhi - xlo);
        let x = px(xv);
        writeln!(s, r#"<line x1="{x:.2}" y1="{BOTTOM:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, BOTTOM + 6.0)
            .unwrap();
        writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="12">{xv:.2}</text>"#,
            BOTTOM + 22.0
        )
        .unwrap();
        let yv = ylo + f * (yhi - ylo);
        let y = py(yv);
        writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT:.2}" y2="{y:.2}" stroke="black"/>"#, LEFT - 6.0)
            .unwrap();
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="12">{yv:.2}</text>"#,
            LEFT - 10.0,
            y + 4.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="430" y="585" text-anchor="middle" font-family="sans-serif" font-size="13">d_ambient</text>"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="22" y="305" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 22 305)">ln d_leaf (log scale)</text>"#
    )
    .unwrap();

    if plotted.len() > 1 {
        let pts: Vec<String> = plotted.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        writeln!(s, r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#, pts.join(" "))
            .unwrap();
    }
    for &(x, y) in &plotted {
        writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="steelblue" stroke="steelblue"/>"#, px(x), py(y))
            .unwrap();
    }
    if !saturated.is_empty() {
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">saturated</text>"#,
            LEFT - 10.0,
            SAT_BAND + 4.0
        )
        .unwrap();
        for &x in &saturated {
            writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{SAT_BAND:.2}" r="5" fill="none" stroke="firebrick" stroke-width="1.5"/>"#,
                px(x)
            )
            .unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}
