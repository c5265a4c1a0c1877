// Along a curve with κ ≥ 1 the basepoint of the osculating horocycle only
// moves anticlockwise. On a hyperbolic circle it goes round exactly once.

use foliation::analysis::{basepoint_monotonicity, CurveSpan};
use foliation::curves::{EuclideanCircle, HorizontalLine};
use foliation::hgeom::Derivatives;

pub fn run_example() {
    let circle = EuclideanCircle { center: [0.0, 2.0], radius: 1.0 };
    let span = CurveSpan { curve: &circle, s0: 0.0, s1: 2.0 * std::f64::consts::PI, closed: true };
    let r = basepoint_monotonicity(span, 1000, Derivatives::Analytic).unwrap();
    println!("circle: {:?}, winding {:.12}, kappa {:.6}", r.verdict, r.winding, r.min_kappa);

    let line = HorizontalLine { height: 1.0 };
    let span = CurveSpan { curve: &line, s0: -5.0, s1: 5.0, closed: false };
    let r = basepoint_monotonicity(span, 100, Derivatives::Analytic).unwrap();
    println!("horocycle: {:?}, winding {}", r.verdict, r.winding);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
