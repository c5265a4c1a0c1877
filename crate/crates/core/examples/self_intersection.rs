// Sweep for polyline crossings with exact orientation tests, then refine
// to a crossing of the smooth curve.

use foliation::analysis::{self_intersection, CurveSpan};
use foliation::curves::{FigureEight, HorizontalLine, LoopedSpiral};
use foliation::hgeom::PlaneCurve;

pub fn run_example() {
    let tau = 2.0 * std::f64::consts::PI;
    let eight = FigureEight { center: [0.0, 3.0], scale: 1.0 };
    let spiral = LoopedSpiral { center: [0.0, 4.0], inner: 0.5, outer: 1.0 };
    let line = HorizontalLine { height: 1.0 };
    let cases: [(&str, &dyn PlaneCurve, f64, f64, bool); 3] = [
        ("figure-eight", &eight, 0.0, tau, true),
        ("spiral", &spiral, 0.0, tau, true),
        ("horocycle", &line, -10.0, 10.0, false),
    ];
    for (name, curve, s0, s1, closed) in cases {
        let r = self_intersection(CurveSpan { curve, s0, s1, closed }, 4001, 1e-3).unwrap();
        match (r.params, r.point, r.residual) {
            (Some((s, t)), Some(p), Some(res)) => {
                println!("{name}: crossing s = {s:.10}, s' = {t:.10} at ({:.3}, {:.3}), residual {res:.1e}", p[0], p[1])
            }
            _ => println!("{name}: none found over {} segments", r.segments),
        }
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
