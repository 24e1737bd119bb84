use quadrature::double_exponential;

use crate::error::{Error, Result};

use super::{HIndex, HValue};

pub const DEFAULT_TOL: f64 = 1e-10;

/// Integrand after `u = s^2`, `s = t / (1 - t)`; bounded on `[0, 1]`.
fn compact_integrand(m: &[u32], args: &[f64], t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let t2 = t * t;
    let c2 = (1.0 - t) * (1.0 - t);
    let mut v = 2.0 / t2 * (t2 / (t2 + c2)).powi(m[0] as i32);
    for (&mj, &x) in m[1..].iter().zip(args) {
        v *= (t2 / (x * t2 + c2)).powi(mj as i32);
    }
    v
}

/// Numeric oracle for any convergent index.
pub fn h_quad(idx: &HIndex, args: &[f64], tol: f64) -> Result<HValue> {
    idx.check_args(args)?;
    if !(tol > 0.0) {
        return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
    }
    let m = idx.m();
    let out = double_exponential::integrate(|t| compact_integrand(m, args, t), 0.0, 1.0, tol * 0.1);
    if !out.integral.is_finite() || out.error_estimate > tol {
        return Err(Error::ConvergenceFailure { tol, estimate: out.error_estimate });
    }
    Ok(HValue { value: out.integral, error: out.error_estimate })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn q(m: &[u32], args: &[f64]) -> f64 {
        h_quad(&HIndex::new(m).unwrap(), args, DEFAULT_TOL).unwrap().value
    }

    #[test]
    fn known_values() {
        assert!((q(&[1, 1], &[1.0]) - PI / 2.0).abs() < 1e-10);
        assert!((q(&[1, 1], &[4.0]) - PI / 6.0).abs() < 1e-10);
        assert!((q(&[2, 1, 1], &[1.0, 1.0]) - 5.0 * PI / 16.0).abs() < 1e-10);
    }

    #[test]
    fn index_beyond_closed_forms() {
        // all arguments 1: Beta(n - 1/2, 1/2) with n = 5
        assert!((q(&[1, 3, 1], &[1.0, 1.0]) - 35.0 * PI / 128.0).abs() < 1e-10);
    }

    #[test]
    fn bad_arguments() {
        let idx = HIndex::new(&[1, 1]).unwrap();
        assert!(h_quad(&idx, &[-1.0], 1e-10).is_err());
        assert!(h_quad(&idx, &[1.0], 0.0).is_err());
    }
}
