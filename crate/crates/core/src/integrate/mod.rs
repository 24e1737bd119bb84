//! From `b2` to the curvature functional: angular moments, normal ordering,
//! the radial rearrangement into H-functions, and structural diffs against
//! the shipped golden transcriptions.

mod average;
mod diff;
pub mod golden;
mod moments;
mod radial;
mod rearrange;

pub use average::{angular_average, fold_sum_index, to_br};
pub use diff::{br_diff, theorem_diff, theorem_diff_with_evidence, BrDiff, Discrepancy, DiscrepancyKind, TheoremDiff};
pub use moments::{normalized_moment, sphere_moment, MAX_MOMENT_DEGREE};
pub use radial::{operands_text, parse_radial_line, radial_terms, BrSum, RadialKey, RadialTerm};
pub use rearrange::{
    apply_rearrangement, assemble_curvature, prefactor_identity_holds, Convention, CurvatureFunctional, HTerm,
    Rearranged,
};
