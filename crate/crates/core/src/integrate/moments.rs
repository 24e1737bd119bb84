use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::ncalg::Coeff;

fn double_factorial(n: i64) -> i64 {
    if n <= 0 {
        1
    } else {
        n * double_factorial(n - 2)
    }
}

/// Highest total xi degree with a tabulated moment.
pub const MAX_MOMENT_DEGREE: u32 = 8;

/// `int_{S^2} w^xi dw / (4 pi / 3)`, exact; odd moments vanish.
pub fn normalized_moment(xi: [u8; 3]) -> Result<Rational64> {
    let deg: u32 = xi.iter().map(|&e| e as u32).sum();
    if deg > MAX_MOMENT_DEGREE {
        return Err(Error::UnknownMoment(deg));
    }
    if xi.iter().any(|e| e % 2 == 1) {
        return Ok(Rational64::from_integer(0));
    }
    let num: i64 = xi.iter().map(|&e| double_factorial(e as i64 - 1)).product();
    let s = deg as i64 / 2;
    Ok(Rational64::new(3 * num, double_factorial(2 * s + 1)))
}

/// `int_{S^2} w^xi dw`, a rational multiple of pi.
pub fn sphere_moment(xi: [u8; 3]) -> Result<Coeff> {
    let m = normalized_moment(xi)?;
    Ok(Coeff::rational(m) * Coeff::frac(4, 3) * Coeff::pi_pow_half(2))
}
