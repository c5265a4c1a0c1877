//! Leaves with pinched curvature and the one-parameter families they
//! generate.
//!
//! * [`build_h2_leaf`]: a curve in H² that is the horocycle `y = 1` over
//!   `θ ∈ [δ, π − δ]` and carries a spike toward the boundary through each
//!   anchor radius, with curvature in `[1 − ε, 1 + ε]`. Its dilates
//!   foliate H².
//! * [`build_e2_leaf`]: a graph in E² that is `δx²` near the origin and
//!   climbs through the anchor heights with `|κ| ≤ ε`. Its vertical
//!   translates foliate E².
//!
//! Only finitely many spikes are built (`n_max + 1` per side).

mod e2;
mod family;
mod format;
mod h2;
mod hermite;
mod shaping;

use std::f64::consts::FRAC_PI_4;

pub use e2::{build_e2_leaf, E2Leaf, E2Spike};
pub use family::{FamilyPoint, FoliationFamily};
pub use format::LeafFormatError;
pub use h2::{build_h2_leaf, LeafCurve, LeafPath, Spike};
pub use hermite::Quintic;

use crate::egeom::GraphError;
use crate::growth::{GrowthError, GrowthOracle};
use crate::hgeom::GeomError;
use crate::quad::QuadError;

/// Deepest spike index accepted by the builders.
pub const MAX_SPIKES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    H2,
    E2,
}

impl Geometry {
    pub fn name(&self) -> &'static str {
        match self {
            Geometry::H2 => "h2",
            Geometry::E2 => "e2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstructionParams {
    /// Angular cutoff (H²) or parabola coefficient (E²).
    pub delta: f64,
    /// Curvature pinch radius.
    pub epsilon: f64,
    /// Parabola half-width `K` (E² only).
    pub k_width: f64,
    pub n_max: usize,
    pub samples_per_segment: usize,
}

impl ConstructionParams {
    pub fn default_h2() -> Self {
        ConstructionParams {
            delta: 0.1,
            epsilon: 0.1,
            k_width: 10.0,
            n_max: 2,
            samples_per_segment: 4096,
        }
    }

    pub fn default_e2() -> Self {
        ConstructionParams {
            delta: 0.05,
            epsilon: 0.1,
            k_width: 10.0,
            n_max: 3,
            samples_per_segment: 4096,
        }
    }

    pub fn defaults_for(geometry: Geometry) -> Self {
        match geometry {
            Geometry::H2 => Self::default_h2(),
            Geometry::E2 => Self::default_e2(),
        }
    }

    /// Checks the invariants shared by both constructions and those of
    /// `geometry`.
    pub fn validate(&self, geometry: Geometry) -> Result<(), ParamError> {
        let fail = |msg: String| Err(ParamError(msg));
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return fail(format!("delta_rad = {} must be positive", self.delta));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return fail(format!("epsilon = {} must lie in (0, 1)", self.epsilon));
        }
        if self.samples_per_segment < 2 {
            return fail(format!(
                "samples_per_segment = {} must be at least 2",
                self.samples_per_segment
            ));
        }
        if self.n_max > MAX_SPIKES {
            return fail(format!("n_max = {} exceeds {MAX_SPIKES}", self.n_max));
        }
        match geometry {
            Geometry::H2 => {
                if self.delta >= FRAC_PI_4 {
                    return fail(format!(
                        "delta_rad = {} violates delta < pi/4",
                        self.delta
                    ));
                }
            }
            Geometry::E2 => {
                if !(self.k_width.is_finite() && self.k_width > 0.0) {
                    return fail(format!("k_width = {} must be positive", self.k_width));
                }
                if 2.0 * self.delta > self.epsilon {
                    return fail(format!(
                        "2*delta = {} exceeds epsilon = {}: the parabola vertex is too curved",
                        2.0 * self.delta,
                        self.epsilon
                    ));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("invalid parameters: {0}")]
pub struct ParamError(pub String);

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("growth oracle: {0}")]
    Oracle(#[from] GrowthError),
    #[error("ln r_{n} is saturated; lower n_max")]
    SaturatedAnchor { n: usize },
    #[error("oracle is not increasing at n = {n}: ln r = {value} after {previous}")]
    NotIncreasing { n: usize, previous: f64, value: f64 },
    #[error(
        "curvature pinch infeasible on {segment}: worst kappa {worst_kappa} \
         outside {bound}"
    )]
    PinchInfeasible {
        segment: String,
        worst_kappa: f64,
        bound: String,
    },
    #[error("{segment} is not monotone at {at}")]
    NotMonotone { segment: String, at: f64 },
}

impl ConstructionError {
    /// Whether the failure is a problem with the inputs rather than the
    /// construction itself.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            ConstructionError::PinchInfeasible { .. } | ConstructionError::NotMonotone { .. }
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub enum LeafError {
    #[error("parameter {value} outside the constructed domain [{min}, {max}]")]
    OutOfDomain { value: f64, min: f64, max: f64 },
    #[error("arc length interval [{a}, {b}] is reversed")]
    Reversed { a: f64, b: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("point and family belong to different geometries")]
    GeometryMismatch,
}

/// A built leaf of either geometry.
#[derive(Clone, Debug, PartialEq)]
pub enum Leaf {
    H2(LeafCurve),
    E2(E2Leaf),
}

impl Leaf {
    pub fn geometry(&self) -> Geometry {
        match self {
            Leaf::H2(_) => Geometry::H2,
            Leaf::E2(_) => Geometry::E2,
        }
    }

    pub fn params(&self) -> &ConstructionParams {
        match self {
            Leaf::H2(l) => l.params(),
            Leaf::E2(l) => l.params(),
        }
    }

    pub fn oracle(&self) -> Option<&GrowthOracle> {
        match self {
            Leaf::H2(l) => l.oracle(),
            Leaf::E2(l) => l.oracle(),
        }
    }
}

/// Anchor logs `ln r_0 ..= ln r_{n_max}`, checked to be finite and
/// strictly increasing.
fn anchor_logs(oracle: &GrowthOracle, n_max: usize) -> Result<Vec<f64>, ConstructionError> {
    let mut out: Vec<f64> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let v = oracle.log_radius(n)?;
        if v.is_saturated() {
            return Err(ConstructionError::SaturatedAnchor { n });
        }
        let v = v.log_value();
        if let Some(&prev) = out.last() {
            if v <= prev {
                return Err(ConstructionError::NotIncreasing {
                    n,
                    previous: prev,
                    value: v,
                });
            }
        }
        out.push(v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_names_the_invariant() {
        let mut p = ConstructionParams::default_h2();
        p.delta = 1.0;
        let e = p.validate(Geometry::H2).unwrap_err();
        assert!(e.0.contains("delta < pi/4"), "{e}");
        let mut p = ConstructionParams::default_e2();
        p.delta = 0.06;
        assert!(p.validate(Geometry::E2).is_err());
        p.delta = 0.05;
        p.validate(Geometry::E2).unwrap();
    }

    #[test]
    fn anchors_reject_saturation_and_decrease() {
        assert_eq!(
            anchor_logs(&GrowthOracle::Tower, 5),
            Err(ConstructionError::SaturatedAnchor { n: 5 })
        );
        assert_eq!(anchor_logs(&GrowthOracle::Tower, 4).unwrap()[4], 65536.0);
    }
}
