// Growth oracles for ln r_n and where each one leaves the f64 range.

use foliation::growth::{ackermann, diagonalizer_doc, GrowthOracle, ACKERMANN_STEP_CAP};

pub fn run_example() {
    let oracles = [
        GrowthOracle::Tower,
        GrowthOracle::AckermannLog { m: 2 },
        GrowthOracle::AckermannLog { m: 3 },
        GrowthOracle::table(vec![0.0, 1.5, 7.0]).unwrap(),
    ];
    for o in &oracles {
        let row: Vec<String> = (0..6)
            .map(|n| match o.log_radius(n) {
                Ok(v) if v.is_saturated() => "sat".to_string(),
                Ok(v) => format!("{}", v.log_value()),
                Err(_) => "-".to_string(),
            })
            .collect();
        println!("{:<12} {}", o.to_string(), row.join(" "));
    }
    assert_eq!(ackermann(4, 1, ACKERMANN_STEP_CAP).unwrap(), Some(65533));
    assert_eq!(ackermann(4, 2, ACKERMANN_STEP_CAP).unwrap(), None);
    println!("A(4, 1) = 65533; A(4, 2) overflows and saturates");
    println!();
    println!("{}", diagonalizer_doc());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
