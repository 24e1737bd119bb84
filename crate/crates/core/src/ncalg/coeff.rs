use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact scalar `q * pi^(pi_half / 2)`.
///
/// The zero coefficient is normalized to `pi_half == 0`, so two coefficients
/// may be added when either is zero or their pi powers agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coeff {
    q: Rational64,
    pi_half: i32,
}

impl Coeff {
    pub fn new(q: Rational64, pi_half: i32) -> Self {
        if q.is_zero() {
            Self::zero()
        } else {
            Coeff { q, pi_half }
        }
    }

    pub fn rational(q: Rational64) -> Self {
        Self::new(q, 0)
    }

    pub fn int(n: i64) -> Self {
        Self::rational(Rational64::from_integer(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::rational(Rational64::new(n, d))
    }

    pub fn zero() -> Self {
        Coeff { q: Rational64::zero(), pi_half: 0 }
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    /// `pi^(half/2)`.
    pub fn pi_pow_half(half: i32) -> Self {
        Coeff { q: Rational64::one(), pi_half: half }
    }

    pub fn q(&self) -> Rational64 {
        self.q
    }

    pub fn pi_half(&self) -> i32 {
        self.pi_half
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.pi_half == 0
    }

    pub fn to_f64(&self) -> f64 {
        let q = *self.q.numer() as f64 / *self.q.denom() as f64;
        q * std::f64::consts::PI.powf(self.pi_half as f64 / 2.0)
    }

    /// Sum, or `None` when the pi powers are incompatible.
    pub fn checked_add(self, rhs: Coeff) -> Option<Coeff> {
        if self.is_zero() {
            Some(rhs)
        } else if rhs.is_zero() {
            Some(self)
        } else if self.pi_half == rhs.pi_half {
            Some(Coeff::new(self.q + rhs.q, self.pi_half))
        } else {
            None
        }
    }

    pub fn inv(self) -> Coeff {
        assert!(!self.is_zero(), "inverse of zero coefficient");
        Coeff::new(self.q.recip(), -self.pi_half)
    }
}

impl Default for Coeff {
    fn default() -> Self {
        Coeff::zero()
    }
}

impl From<i64> for Coeff {
    fn from(n: i64) -> Self {
        Coeff::int(n)
    }
}

impl From<Rational64> for Coeff {
    fn from(q: Rational64) -> Self {
        Coeff::rational(q)
    }
}

impl Add for Coeff {
    type Output = Coeff;
    /// Panics when adding nonzero coefficients with different pi powers.
    fn add(self, rhs: Coeff) -> Coeff {
        self.checked_add(rhs)
            .unwrap_or_else(|| panic!("incompatible pi powers in {self} + {rhs}"))
    }
}

impl Sub for Coeff {
    type Output = Coeff;
    fn sub(self, rhs: Coeff) -> Coeff {
        self + (-rhs)
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff::new(-self.q, self.pi_half)
    }
}

impl Mul for Coeff {
    type Output = Coeff;
    fn mul(self, rhs: Coeff) -> Coeff {
        Coeff::new(self.q * rhs.q, self.pi_half + rhs.pi_half)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (*self.q.numer(), *self.q.denom());
        if self.pi_half == 0 || self.is_zero() {
            return if d == 1 { write!(f, "{n}") } else { write!(f, "{n}/{d}") };
        }
        let pi = match self.pi_half {
            2 => "pi".to_string(),
            h if h % 2 == 0 => format!("pi^{}", h / 2),
            h => format!("pi^({h}/2)"),
        };
        match (n, d) {
            (1, 1) => write!(f, "{pi}"),
            (-1, 1) => write!(f, "-{pi}"),
            (n, 1) => write!(f, "{n}*{pi}"),
            (n, d) => write!(f, "{n}/{d}*{pi}"),
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational64> {
    let s = s.trim();
    let err = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| err())?;
            let d: i64 = d.trim().parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            Ok(Rational64::new(n, d))
        }
        None => Ok(Rational64::from_integer(s.parse().map_err(|_| err())?)),
    }
}

impl FromStr for Coeff {
    type Err = Error;

    /// Accepts the `Display` forms: `-3/2`, `pi`, `-pi`, `2*pi`, `-4/3*pi^(1/2)`.
    fn from_str(s: &str) -> Result<Coeff> {
        let s = s.trim();
        let (num, pi) = match s.find("pi") {
            None => return Ok(Coeff::rational(parse_rational(s)?)),
            Some(pos) => (s[..pos].trim_end_matches('*').trim(), &s[pos + 2..]),
        };
        let q = match num {
            "" => Rational64::one(),
            "-" => -Rational64::one(),
            other => parse_rational(other)?,
        };
        let pi_half = if pi.is_empty() {
            2
        } else {
            let exp = pi
                .strip_prefix('^')
                .ok_or_else(|| Error::Parse(format!("bad pi power in {s:?}")))?;
            let exp = exp.trim_start_matches('(').trim_end_matches(')');
            let r = parse_rational(exp)? * Rational64::from_integer(2);
            if !r.is_integer() {
                return Err(Error::Parse(format!("pi power must be a multiple of 1/2: {s:?}")));
            }
            r.to_integer() as i32
        };
        Ok(Coeff::new(q, pi_half))
    }
}

/// Renders a signed coefficient as a term prefix: `+ 3/2`, `- 6`, ...
pub(crate) fn signed_prefix(c: &Coeff) -> (char, Coeff) {
    if c.q().is_negative() {
        ('-', -*c)
    } else {
        ('+', *c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_round_trip() {
        for s in ["-3/2", "7", "pi", "-pi", "2*pi", "-4/3*pi^(1/2)", "35/128*pi", "pi^(3/2)"] {
            let c: Coeff = s.parse().unwrap();
            assert_eq!(c.to_string(), s);
        }
    }

    #[test]
    fn zero_has_no_pi() {
        let c = Coeff::pi_pow_half(2) - Coeff::pi_pow_half(2);
        assert!(c.is_zero());
        assert_eq!(c.pi_half(), 0);
        assert_eq!(c + Coeff::int(3), Coeff::int(3));
    }

    #[test]
    fn mixed_pi_powers_do_not_add() {
        assert!(Coeff::int(1).checked_add(Coeff::pi_pow_half(1)).is_none());
    }

    #[test]
    fn prefactor_bookkeeping() {
        // (-1/sqrt(pi)) (4 pi / 3) (1/2) == (-4 sqrt(pi) / 3) (1/2)
        let lhs = Coeff::new(Rational64::from_integer(-1), -1)
            * Coeff::new(Rational64::new(4, 3), 2)
            * Coeff::frac(1, 2);
        let rhs = Coeff::new(Rational64::new(-4, 3), 1) * Coeff::frac(1, 2);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, Coeff::new(Rational64::new(-2, 3), 1));
    }
}
