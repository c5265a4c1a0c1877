// Dilates of one leaf fill the half-plane: each point lies on exactly one
// of them, found in closed form.

use foliation::hgeom::PolarPoint;
use foliation::leafgen::{build_h2_leaf, ConstructionParams, FamilyPoint, FoliationFamily, Leaf};
use foliation::growth::GrowthOracle;

pub fn run_example() {
    let mut params = ConstructionParams::default_h2();
    params.samples_per_segment = 512;
    let base = build_h2_leaf(&params, &GrowthOracle::Tower).unwrap();
    let fam = FoliationFamily::H2Dilation { base: base.clone() };
    let mut worst = 0.0f64;
    for i in 0..10 {
        for j in 0..10 {
            let theta = base.theta_min() + (std::f64::consts::PI - 2.0 * base.theta_min()) * (i as f64 + 0.5) / 10.0;
            let log_r = -20.0 + 4.0 * j as f64;
            let t = fam.leaf_through_point(FamilyPoint::H2(PolarPoint::new(theta, log_r).unwrap())).unwrap();
            let Leaf::H2(leaf) = fam.leaf_at(t) else { unreachable!() };
            worst = worst.max((leaf.eval(theta).unwrap() - log_r).abs());
        }
    }
    println!("100 points, worst residual on their leaves {worst:.1e}");
    assert!(worst <= 1e-10);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
