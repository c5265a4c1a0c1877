// The Euclidean leaf: parabola y = δx², a bend, then spikes in log height
// with |κ| ≤ ε throughout.

use foliation::analysis::{curvature_scan, ScanTarget};
use foliation::growth::GrowthOracle;
use foliation::leafgen::{build_e2_leaf, ConstructionParams};

pub fn run_example() {
    let params = ConstructionParams::default_e2();
    let leaf = build_e2_leaf(&params, &GrowthOracle::Tower).unwrap();
    let k = curvature_scan(ScanTarget::E2(&leaf), params.samples_per_segment).unwrap();
    println!("bend width {}, |kappa| <= {:.6}", leaf.bend_width(), k.max_deviation(0.0));
    assert!(k.max_deviation(0.0) <= params.epsilon);
    for n in 0..leaf.spikes().len() {
        let x = leaf.anchor_x(n).unwrap();
        let len = leaf.arc_length(0.0, x).unwrap();
        println!(
            "anchor {n}: x {x:<4} ln y {:<10.6} ln(arc from 0) {:.6}",
            leaf.anchor_log_height(n).unwrap(),
            len.log_value()
        );
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
