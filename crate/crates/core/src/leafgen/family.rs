//! One-parameter families of leaves filling the plane.

use super::{E2Leaf, Leaf, LeafCurve, LeafError};
use crate::hgeom::PolarPoint;

#[derive(Clone, Debug, PartialEq)]
pub enum FoliationFamily {
    /// Leaves `ρ_t(θ) = ρ(θ) + ln t`, images of the base under `z ↦ tz`.
    H2Dilation { base: LeafCurve },
    /// Leaves `y = φ(x) + c`.
    E2Translation { base: E2Leaf },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FamilyPoint {
    H2(PolarPoint),
    E2 { x: f64, y: f64 },
}

impl FoliationFamily {
    /// The leaf with parameter `ln t` (H²) or `c` (E²).
    pub fn leaf_at(&self, param: f64) -> Leaf {
        match self {
            FoliationFamily::H2Dilation { base } => Leaf::H2(base.dilated(param)),
            FoliationFamily::E2Translation { base } => Leaf::E2(base.translated(param)),
        }
    }

    /// Parameter of the unique leaf through `p`.
    ///
    /// Along a ray from the origin (H²) or a vertical line (E²) the leaf
    /// parameter is an exact offset of the base leaf, so no search is
    /// needed.
    pub fn leaf_through_point(&self, p: FamilyPoint) -> Result<f64, LeafError> {
        match (self, p) {
            (FoliationFamily::H2Dilation { base }, FamilyPoint::H2(q)) => {
                Ok(q.log_r - base.eval(q.theta)?)
            }
            (FoliationFamily::E2Translation { base }, FamilyPoint::E2 { x, y }) => {
                Ok(y - base.value(x)?)
            }
            _ => Err(LeafError::GeometryMismatch),
        }
    }
}
