//! End-to-end derivation: resolvent terms, `B(r)`, and the curvature functional.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::integrate::{assemble_curvature, to_br, BrSum, Convention, CurvatureFunctional};
use crate::symcalc::{resolvent_terms, Resolvent};

/// Merged term count of `b2` with concrete derivative indices, frozen as a
/// regression value.
pub const FROZEN_B2_COUNT: usize = 3186;

#[derive(Clone, Copy, Debug, Default)]
pub struct DeriveOptions {
    pub convention: Convention,
    /// Constant conformal factor: drops every term with a derivative of `k`.
    pub flat: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    /// Merged terms in `b0, b1, b2`.
    pub b: Vec<usize>,
    pub br_terms: usize,
    pub functional_lines: usize,
}

#[derive(Clone, Debug)]
pub struct Derivation {
    pub resolvent: Resolvent,
    pub br: BrSum,
    pub functional: CurvatureFunctional,
    pub elapsed: Duration,
}

impl Derivation {
    pub fn counts(&self) -> Counts {
        Counts {
            b: self.resolvent.counts(),
            br_terms: self.br.len(),
            functional_lines: self.functional.lines.len(),
        }
    }
}

pub fn derive(opts: DeriveOptions) -> Result<Derivation> {
    let start = Instant::now();
    let mut resolvent = resolvent_terms(2)?;
    if opts.flat {
        resolvent = resolvent.flat();
    }
    let br = to_br(&resolvent.b[2])?;
    let functional = assemble_curvature(&br, opts.convention)?;
    Ok(Derivation { resolvent, br, functional, elapsed: start.elapsed() })
}
