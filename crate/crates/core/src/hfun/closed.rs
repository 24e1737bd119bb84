use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::{HIndex, HValue};

/// Indices with a closed form.
pub const CLOSED_FORMS: [&[u32]; 8] = [
    &[1, 1],
    &[2, 1],
    &[3, 1],
    &[1, 1, 1],
    &[2, 1, 1],
    &[1, 2, 1],
    &[2, 2, 1],
    &[3, 1, 1],
];

/// Below this relative separation `H_{3,1,1}` switches to the diagonal form.
const DIAGONAL_GAP: f64 = 1e-6;

fn h11(x: f64) -> f64 {
    PI / (x + x.sqrt())
}

fn h21(x: f64) -> f64 {
    let s = x.sqrt();
    (2.0 * PI / s + PI) / (2.0 * (s + 1.0).powi(2))
}

fn h31(x: f64) -> f64 {
    PI * a31(x) / 8.0
}

/// `(3x + 9 sqrt x + 8) / ((sqrt x + 1)^3 sqrt x)`.
fn a31(x: f64) -> f64 {
    let s = x.sqrt();
    (3.0 * x + 9.0 * s + 8.0) / ((s + 1.0).powi(3) * s)
}

fn h111(x: f64, y: f64) -> f64 {
    let (s, t) = (x.sqrt(), y.sqrt());
    PI * (s + t + 1.0) / ((s + 1.0) * s * (y + t) * (s + t))
}

fn h211(x: f64, y: f64) -> f64 {
    let (s, t) = (x.sqrt(), y.sqrt());
    let num = s * (t + 2.0).powi(2) + x * (t + 2.0) + 2.0 * (t + 1.0).powi(2);
    PI * num / (2.0 * (s + 1.0).powi(2) * s * (t + 1.0).powi(2) * t * (s + t))
}

fn h121(x: f64, y: f64) -> f64 {
    let (s, t) = (x.sqrt(), y.sqrt());
    let x32 = x * s;
    let num = 2.0 * x32 + 4.0 * x * (t + 1.0) + 2.0 * s * (t + 1.0).powi(2) + y + t;
    PI * num / (2.0 * (s + 1.0).powi(2) * x32 * (t + 1.0) * t * (s + t).powi(2))
}

fn h221(x: f64, y: f64) -> f64 {
    let (s, t) = (x.sqrt(), y.sqrt());
    let x32 = x * s;
    let den = 2.0 * (s + 1.0).powi(3) * x32 * (t + 1.0).powi(2) * t * (s + t).powi(2);
    let n1 = 2.0 * (x32 + 4.0 * x + 4.0 * s + 1.0) * y + (7.0 * x32 + x * x + 13.0 * x + 7.0 * s + 1.0) * t;
    let n2 = (x + 3.0 * s + 1.0) * y * t + 2.0 * (s + 1.0).powi(3) * s;
    PI * n1 / den + PI * n2 / den
}

/// `H_{3,1,1}(x, x) = -pi/8 d/dx a31(x)`.
pub fn h311_diagonal(x: f64) -> f64 {
    let s = x.sqrt();
    let n = 3.0 * x + 9.0 * s + 8.0;
    let dn = 6.0 * s + 9.0;
    let d = s * (s + 1.0).powi(3);
    let dd = (s + 1.0).powi(2) * (4.0 * s + 1.0);
    let da_ds = (dn * d - n * dd) / (d * d);
    -PI * da_ds / (2.0 * s) / 8.0
}

fn h311(x: f64, y: f64) -> (f64, f64) {
    let gap = (x - y).abs();
    if gap < DIAGONAL_GAP * x.max(y) {
        // second-order error of the midpoint derivative
        let v = h311_diagonal(0.5 * (x + y));
        (v, v.abs() * (gap / x.max(y)).powi(2) + f64::EPSILON * v.abs())
    } else {
        let v = PI * (a31(y) - a31(x)) / (8.0 * (x - y));
        let cancel = PI * (a31(x).abs() + a31(y).abs()) / (8.0 * gap) * f64::EPSILON;
        (v, 16.0 * (cancel + f64::EPSILON * v.abs()))
    }
}

/// Evaluates one of the eight closed forms.
pub fn h_closed(idx: &HIndex, args: &[f64]) -> Result<HValue> {
    idx.check_args(args)?;
    let rounding = |v: f64| HValue { value: v, error: 64.0 * f64::EPSILON * v.abs() };
    Ok(match (idx.m(), args) {
        ([1, 1], &[x]) => rounding(h11(x)),
        ([2, 1], &[x]) => rounding(h21(x)),
        ([3, 1], &[x]) => rounding(h31(x)),
        ([1, 1, 1], &[x, y]) => rounding(h111(x, y)),
        ([2, 1, 1], &[x, y]) => rounding(h211(x, y)),
        ([1, 2, 1], &[x, y]) => rounding(h121(x, y)),
        ([2, 2, 1], &[x, y]) => rounding(h221(x, y)),
        ([3, 1, 1], &[x, y]) => {
            let (value, error) = h311(x, y);
            HValue { value, error }
        }
        (m, _) => return Err(Error::UnsupportedIndex(m.to_vec())),
    })
}
