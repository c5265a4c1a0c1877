// The pair (r, θ), (r, π − θ) sits at a distance that ignores r, even
// where r itself overflows an f64.

use foliation::hgeom::{
    boundary_angle, osculating_horocycle, polar_distance, symmetric_pair_distance, HPoint, PolarPoint,
    UnitVector,
};

pub fn run_example() {
    for n in 0..=5 {
        let theta = 0.1 / 2f64.powi(n);
        let want = symmetric_pair_distance(theta).unwrap();
        let spread = [0.0, 10.0, 100.0, 600.0, 65536.0]
            .iter()
            .map(|&lr| {
                let p = PolarPoint::new(theta, lr).unwrap();
                let q = PolarPoint::new(std::f64::consts::PI - theta, lr).unwrap();
                (polar_distance(p, q).unwrap() - want).abs()
            })
            .fold(0.0, f64::max);
        assert!(spread < 1e-9);
        println!("theta {theta:<10} distance {want:.12} (max deviation over ln r: {spread:.1e})");
    }

    // osculating horocycles of the circle |z − 2i| = 1 at its rightmost point
    let p = HPoint::from_xy(1.0, 2.0);
    let inward = UnitVector::new(-1.0, 0.0).unwrap();
    let h = osculating_horocycle(p, inward);
    println!("inward horocycle at (1, 2): {:?}, boundary angle {:.6}", h.basepoint, boundary_angle(h.basepoint));
}

#[allow(dead_code)]
fn main() {
    run_example();
}
