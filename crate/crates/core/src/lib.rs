//! Curvature-pinched horocycle-like leaves in H² and E², and the tools to
//! measure how badly their intrinsic distances can distort.

pub mod curves;
pub mod egeom;
pub mod growth;
pub mod hgeom;
pub mod leafgen;
pub mod analysis;
pub mod cli;
pub mod quad;
pub mod scan;
pub mod svg;
