// Points (±a, 1) on the horocycle y = 1: leaf distance 2a against
// ambient distance 2·asinh(a), so the leaf distance is 2·sinh(d/2).

use foliation::analysis::horocycle_distortion_law;
use foliation::hgeom::{hyp_distance, HPoint};

pub fn run_example() {
    println!("{:>10} {:>14} {:>14} {:>10}", "a", "d_leaf", "d_ambient", "rel err");
    for k in 0..=6 {
        let a = 10f64.powi(k - 3);
        let (leaf, ambient) = horocycle_distortion_law(a).unwrap();
        let direct = hyp_distance(HPoint::from_xy(-a, 1.0), HPoint::from_xy(a, 1.0)).unwrap();
        assert!((direct - ambient).abs() <= 1e-12 * (1.0 + ambient));
        let law = 2.0 * (0.5 * ambient).sinh();
        let rel = (leaf - law).abs() / leaf;
        assert!(rel < 1e-9);
        println!("{a:>10.3e} {leaf:>14.6} {ambient:>14.9} {rel:>10.1e}");
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
