use serde::Serialize;

use crate::error::{Error, Result};
use crate::ncalg::Coeff;

use super::calculus::{compose, Resolvent};
use super::embed::{residual_size, sample_terms};
use super::term::{SymbolSum, TermKey};

#[derive(Clone, Debug, Serialize)]
pub struct OrderCheck {
    pub order: i32,
    /// Merged terms before the exact zero test.
    pub raw_terms: usize,
    /// Nonzero coefficients after clearing denominators.
    pub residual: usize,
    pub sample: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParametrixReport {
    pub checks: Vec<OrderCheck>,
}

impl ParametrixReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.residual == 0)
    }
}

/// Composes `b0 + b1 + b2` with the symbol of `P - lambda` and tests that
/// the parts of order 0, -1, -2 equal `1, 0, 0` exactly.
pub fn check_parametrix(res: &Resolvent) -> Result<ParametrixReport> {
    let prod = compose(&res.parametrix(), &res.symbol_p_minus_lambda(), -(res.b.len() as i32) + 1)?;
    let mut checks = Vec::new();
    for n in 0..res.b.len() as i32 {
        let order = -n;
        let mut part = prod.part(order);
        if order == 0 {
            part.add(-Coeff::one(), TermKey::new([0; 3], 0, []));
        }
        checks.push(OrderCheck {
            order,
            raw_terms: part.len(),
            residual: residual_size(&part),
            sample: sample_terms(&part, 4),
        });
    }
    Ok(ParametrixReport { checks })
}

/// Like [`check_parametrix`], but fails on the first nonvanishing order.
pub fn verify_parametrix(res: &Resolvent) -> Result<ParametrixReport> {
    let report = check_parametrix(res)?;
    if let Some(c) = report.checks.iter().find(|c| c.residual != 0) {
        return Err(Error::ParametrixFailure { order: c.order, residual_terms: c.residual });
    }
    Ok(report)
}

/// Composition of a single symbol with `P - lambda` at one order, for
/// callers that want to inspect a failing identity.
pub fn residual_at(res: &Resolvent, order: i32) -> Result<SymbolSum> {
    let prod = compose(&res.parametrix(), &res.symbol_p_minus_lambda(), order)?;
    Ok(prod.part(order))
}
