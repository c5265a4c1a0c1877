//! Comparison of a profile with the exponential bound `2·sinh(d/2)` that
//! holds for leaves with curvature in `[-1, 1]`.

use super::{AnalysisError, DistortionProfile};

/// Absolute slack added to the bound before comparing.
pub const EXP_BOUND_SLACK: f64 = 1e-6;

const KAPPA_TOL: f64 = 1e-6;

/// Leaf and ambient distance between the points `(±a, 1)` of the
/// horocycle `y = 1`: `(2a, 2·asinh a)`.
pub fn horocycle_distortion_law(a: f64) -> Result<(f64, f64), AnalysisError> {
    if !(a.is_finite() && a >= 0.0) {
        return Err(AnalysisError::InvalidInput(format!(
            "half-separation {a} must be finite and non-negative"
        )));
    }
    Ok((2.0 * a, 2.0 * a.asinh()))
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExpBoundVerdict {
    Holds,
    /// First sample (in profile order) above the bound.
    Violated { index: usize },
    Inapplicable { reason: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpBoundReport {
    pub verdict: ExpBoundVerdict,
    /// Largest `ln d_leaf − ln(bound + slack)`; negative when all hold.
    pub worst_log_margin: f64,
    /// `max d_leaf · e^{−d_ambient}` over samples with `d_ambient > 0`.
    pub fitted_prefactor: Option<f64>,
    pub checked: usize,
    pub saturated_skipped: usize,
}

fn ln_two_sinh_half(d: f64) -> f64 {
    if d < 40.0 {
        (2.0 * (0.5 * d).sinh()).ln()
    } else {
        0.5 * d + (-(-d).exp()).ln_1p()
    }
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Checks every unsaturated sample of `profile` against
/// `d_leaf ≤ 2·sinh(d_ambient/2)`, given the leaf's curvature range.
pub fn exponential_bound_check(
    profile: &DistortionProfile,
    kappa_range: (f64, f64),
) -> ExpBoundReport {
    let (lo, hi) = kappa_range;
    let reason = if hi > 1.0 + KAPPA_TOL {
        Some(format!("κ exceeds 1 (max {hi})"))
    } else if lo < -1.0 - KAPPA_TOL {
        Some(format!("κ below -1 (min {lo})"))
    } else {
        None
    };
    let mut worst = f64::NEG_INFINITY;
    let mut prefactor: Option<f64> = None;
    let mut first_bad = None;
    let mut checked = 0;
    let mut skipped = 0;
    for (i, s) in profile.samples.iter().enumerate() {
        if s.d_leaf.is_saturated() {
            skipped += 1;
            continue;
        }
        checked += 1;
        let ln_leaf = s.d_leaf.log_value();
        let ln_bound = log_add_exp(ln_two_sinh_half(s.d_ambient), EXP_BOUND_SLACK.ln());
        let margin = ln_leaf - ln_bound;
        worst = worst.max(margin);
        if margin > 0.0 && first_bad.is_none() {
            first_bad = Some(i);
        }
        if s.d_ambient > 0.0 {
            let f = (ln_leaf - s.d_ambient).exp();
            prefactor = Some(prefactor.map_or(f, |p| p.max(f)));
        }
    }
    let verdict = match (reason, first_bad) {
        (Some(reason), _) => ExpBoundVerdict::Inapplicable { reason },
        (None, Some(index)) => ExpBoundVerdict::Violated { index },
        (None, None) => ExpBoundVerdict::Holds,
    };
    ExpBoundReport {
        verdict,
        worst_log_margin: worst,
        fitted_prefactor: prefactor,
        checked,
        saturated_skipped: skipped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{distortion_profile, DistortionSample, SamplingPlan};
    use crate::hgeom::LogScalar;
    use crate::leafgen::{Leaf, LeafCurve};
    use proptest::prelude::*;

    #[test]
    fn horocycle_law_values() {
        let (l, d) = horocycle_distortion_law(1.0).unwrap();
        assert_eq!(l, 2.0);
        assert!((d - 2.0 * (1.0f64 + 2f64.sqrt()).ln()).abs() < 1e-15);
        assert!(horocycle_distortion_law(-1.0).is_err());
        assert!(horocycle_distortion_law(f64::NAN).is_err());
    }

    proptest! {
        #[test]
        fn law_saturates_bound(a in 0.0f64..1e6) {
            let (l, d) = horocycle_distortion_law(a).unwrap();
            let b = ln_two_sinh_half(d).exp();
            prop_assert!((l - b).abs() <= 1e-9 * (1.0 + l));
        }
    }

    #[test]
    fn horocycle_leaf_holds() {
        let leaf = Leaf::H2(LeafCurve::horocycle(0.1));
        let angles = (1..=40).map(|k| k as f64 * 0.039).collect();
        let prof = distortion_profile(&leaf, &SamplingPlan::Angles(angles)).unwrap();
        let r = exponential_bound_check(&prof, (1.0, 1.0));
        assert_eq!(r.verdict, ExpBoundVerdict::Holds);
        assert!(r.worst_log_margin <= 0.0);
        assert!(r.worst_log_margin > -1e-3);
        assert!(r.fitted_prefactor.unwrap() < 1.0);
    }

    fn one(d: f64, l: LogScalar) -> DistortionProfile {
        DistortionProfile {
            samples: vec![DistortionSample { n: None, theta: 1.0, d_ambient: d, d_leaf: l, label: String::new() }],
            provenance: String::new(),
        }
    }

    #[test]
    fn violations_and_inapplicable() {
        let r = exponential_bound_check(&one(1.0, LogScalar::from_value(5.0)), (0.0, 1.0));
        assert_eq!(r.verdict, ExpBoundVerdict::Violated { index: 0 });
        let r = exponential_bound_check(&one(1.0, LogScalar::from_value(5.0)), (0.9, 1.1));
        assert!(matches!(r.verdict, ExpBoundVerdict::Inapplicable { ref reason } if reason.contains("exceeds 1")));
        let r = exponential_bound_check(&one(1.0, LogScalar::from_value(0.5)), (-1.5, 0.0));
        assert!(matches!(r.verdict, ExpBoundVerdict::Inapplicable { ref reason } if reason.contains("below -1")));
        let r = exponential_bound_check(&one(1.0, LogScalar::saturated()), (0.0, 1.0));
        assert_eq!(r.saturated_skipped, 1);
        assert_eq!(r.checked, 0);
        assert_eq!(r.verdict, ExpBoundVerdict::Holds);
    }

    #[test]
    fn huge_ambient_distance_in_log_domain() {
        let r = exponential_bound_check(&one(2000.0, LogScalar::from_log(999.0)), (1.0, 1.0));
        assert_eq!(r.verdict, ExpBoundVerdict::Holds);
        let r = exponential_bound_check(&one(2000.0, LogScalar::from_log(1001.0)), (1.0, 1.0));
        assert_eq!(r.verdict, ExpBoundVerdict::Violated { index: 0 });
    }
}
