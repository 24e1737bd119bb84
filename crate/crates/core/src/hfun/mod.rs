//! The H-function basis
//!
//! `H_{m0,...,ml}(x_1, ..., x_l) = int_0^inf (u+1)^-m0 prod (u x_j + 1)^-mj u^(sum m - 3/2) du`.

mod closed;
mod commutative;
mod contour;
mod limits;
mod quad;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

pub use closed::{h_closed, h311_diagonal, CLOSED_FORMS};
pub use commutative::{commutative_limit, CommutativeLimit, LogForm};
pub use contour::{complex_erf, contour_constant, contour_pieces, ContourPieces};
pub use limits::{exact_limit, limit_f64};
pub use quad::{h_quad, DEFAULT_TOL};

/// Exponents `(m0, m1, ..., ml)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HIndex(Vec<u32>);

impl HIndex {
    pub fn new(m: &[u32]) -> Result<Self> {
        if m.len() < 2 || m.contains(&0) {
            return Err(Error::UnsupportedIndex(m.to_vec()));
        }
        if m.iter().sum::<u32>() < 2 {
            return Err(Error::Divergent(m.to_vec()));
        }
        Ok(HIndex(m.to_vec()))
    }

    pub fn m(&self) -> &[u32] {
        &self.0
    }

    /// Number of arguments `l`.
    pub fn arity(&self) -> usize {
        self.0.len() - 1
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub(crate) fn check_args(&self, args: &[f64]) -> Result<()> {
        if args.len() != self.arity() {
            return Err(Error::Config(format!("{self} takes {} arguments, got {}", self.arity(), args.len())));
        }
        if let Some(x) = args.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::Config(format!("H arguments must be positive, got {x}")));
        }
        Ok(())
    }
}

impl fmt::Display for HIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "H_{{{}}}", m.join(","))
    }
}

impl FromStr for HIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let m = s
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad H index {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        HIndex::new(&m)
    }
}

/// A value with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HValue {
    pub value: f64,
    pub error: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let h: HIndex = "2, 1,1".parse().unwrap();
        assert_eq!(h.m(), &[2, 1, 1]);
        assert_eq!(h.to_string(), "H_{2,1,1}");
        assert_eq!(h.arity(), 2);
        assert!("1".parse::<HIndex>().is_err());
        assert!("1,0".parse::<HIndex>().is_err());
    }
}
