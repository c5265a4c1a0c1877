// The default hyperbolic leaf: horocycle core, three spikes per side,
// curvature inside [0.9, 1.1], and an exact text round trip.

use foliation::analysis::{curvature_scan, ScanTarget};
use foliation::growth::GrowthOracle;
use foliation::leafgen::{build_h2_leaf, ConstructionParams, Leaf};

pub fn run_example() {
    let params = ConstructionParams::default_h2();
    let leaf = build_h2_leaf(&params, &GrowthOracle::Tower).unwrap();
    let k = curvature_scan(ScanTarget::H2(&leaf), params.samples_per_segment).unwrap();
    println!("kappa in [{:.6}, {:.6}]", k.min, k.max);
    assert!(k.min >= 0.9 && k.max <= 1.1);
    for (n, s) in leaf.spikes().iter().enumerate() {
        println!(
            "anchor {n}: theta {:<8} rho {:<10.6} ln r_n {}",
            s.theta_lo,
            leaf.eval(s.theta_lo).unwrap(),
            s.log_radius
        );
    }
    let text = Leaf::H2(leaf.clone()).to_text();
    assert_eq!(Leaf::parse(&text).unwrap(), Leaf::H2(leaf));
    println!("leaf file: {} lines, round trip exact", text.lines().count());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
