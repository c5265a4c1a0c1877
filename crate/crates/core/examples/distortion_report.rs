// Distortion profile of the default leaf at its anchors, as CSV and as
// the SVG chart.

use foliation::analysis::{distortion_profile, write_csv, SamplingPlan};
use foliation::growth::GrowthOracle;
use foliation::leafgen::{build_h2_leaf, ConstructionParams, Leaf};
use foliation::svg::render_svg;

pub fn run_example() {
    let mut params = ConstructionParams::default_h2();
    params.n_max = 4;
    params.samples_per_segment = 1024;
    let leaf = Leaf::H2(build_h2_leaf(&params, &GrowthOracle::Tower).unwrap());
    let prof = distortion_profile(&leaf, &SamplingPlan::all_anchors(&leaf)).unwrap();
    print!("{}", write_csv(&prof));
    let svg = render_svg(&prof, "default leaf, tower oracle");
    assert_eq!(svg, render_svg(&prof, "default leaf, tower oracle"));
    println!("svg: {} bytes", svg.len());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
