//! Shipped transcriptions of the published curvature formula and of both
//! displays of the radial integrand.

use crate::error::Result;

use super::radial::BrSum;
use super::rearrange::CurvatureFunctional;

pub const THEOREM_JSON: &str = include_str!("../../golden/theorem.json");
pub const BR_ORDERED: &str = include_str!("../../golden/br_ordered.txt");
pub const BR_RAW: &str = include_str!("../../golden/br_raw.txt");

pub fn theorem() -> Result<CurvatureFunctional> {
    CurvatureFunctional::from_json(&serde_json::from_str(THEOREM_JSON)?)
}

/// The normal-ordered display.
pub fn br_ordered() -> Result<BrSum> {
    BrSum::parse(BR_ORDERED)
}

/// The display written before normal ordering, parsed (which normal-orders it).
pub fn br_raw() -> Result<BrSum> {
    BrSum::parse(BR_RAW)
}
