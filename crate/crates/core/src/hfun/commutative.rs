use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;
use crate::integrate::CurvatureFunctional;
use crate::ncalg::{signed_prefix, Coeff, CommPoly, DWord, Factor, NCPoly, SUM};

use super::{exact_limit, HIndex};

/// A commutative term `k^a` times sorted derivative words.
pub type CommKey = (i32, Vec<DWord>);

/// `sum_a k^a (A_a delta_i delta_i log k + B_a (delta_i log k)^2)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LogForm {
    pub ddlog: BTreeMap<i32, Coeff>,
    pub dlog_sq: BTreeMap<i32, Coeff>,
}

impl LogForm {
    /// Rewrites through `k^a dd k = k^(a+1) (dd log k + (d log k)^2)` and
    /// `k^a (d k)^2 = k^(a+2) (d log k)^2`; `None` for other term shapes.
    pub fn from_poly(p: &CommPoly) -> Option<LogForm> {
        let dd = DWord::k(&[SUM, SUM]);
        let d = DWord::k(&[SUM]);
        let mut out = LogForm::default();
        let add = |m: &mut BTreeMap<i32, Coeff>, a: i32, c: Coeff| {
            let e = m.entry(a).or_default();
            *e = *e + c;
        };
        for (a, words, c) in p.terms() {
            if words == [dd.clone()] {
                add(&mut out.ddlog, a + 1, c);
                add(&mut out.dlog_sq, a + 1, c);
            } else if words == [d.clone(), d.clone()] {
                add(&mut out.dlog_sq, a + 2, c);
            } else {
                return None;
            }
        }
        out.ddlog.retain(|_, c| !c.is_zero());
        out.dlog_sq.retain(|_, c| !c.is_zero());
        Some(out)
    }
}

impl fmt::Display for LogForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items = self
            .ddlog
            .iter()
            .map(|(a, c)| (c, *a, "[di di log k]"))
            .chain(self.dlog_sq.iter().map(|(a, c)| (c, *a, "[di log k] [di log k]")));
        let mut first = true;
        for (c, a, w) in items {
            let (sign, mag) = signed_prefix(c);
            match (first, sign) {
                (true, '-') => write!(f, "-")?,
                (true, _) => {}
                (false, s) => write!(f, " {s} ")?,
            }
            first = false;
            write!(f, "{mag} k^{a} {w}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The functional with every modular operator set to the identity.
#[derive(Clone, Debug)]
pub struct CommutativeLimit {
    /// Lines with each `H` replaced by its value at the commutative point.
    pub poly: CommPoly,
    /// For each commutative term, the rational weight of each `H` index
    /// before evaluation.
    pub breakdown: BTreeMap<CommKey, BTreeMap<Vec<u32>, Coeff>>,
    pub log: Option<LogForm>,
}

impl CommutativeLimit {
    /// Weighted sum of H limits for one term, e.g. `-9/4 pi + 15/4 pi - 5/2 pi`.
    pub fn breakdown_text(&self, key: &CommKey) -> String {
        let Some(b) = self.breakdown.get(key) else { return "0".into() };
        let parts: Vec<String> = b
            .iter()
            .map(|(h, w)| {
                let idx = HIndex::new(h).expect("emitted indices are valid");
                format!("{} [{w} {idx}]", *w * exact_limit(&idx))
            })
            .collect();
        parts.join(" + ")
    }
}

fn line_word(kpow: i32, operands: &[Vec<Factor>]) -> Vec<Factor> {
    let mut w = vec![Factor::KPow(kpow)];
    w.extend(operands.iter().flatten().cloned());
    w
}

/// Evaluates every H-combination at all arguments 1 in exact arithmetic,
/// expands `delta(k^-1)` words and collects commutative terms.
pub fn commutative_limit(f: &CurvatureFunctional) -> Result<CommutativeLimit> {
    let mut breakdown: BTreeMap<CommKey, BTreeMap<Vec<u32>, Coeff>> = BTreeMap::new();
    for line in &f.lines {
        let image = NCPoly::monomial(Coeff::one(), line_word(line.kpow, &line.operands)).commutative_image();
        for (a, words, c) in image.terms() {
            let slot = breakdown.entry((a, words.to_vec())).or_default();
            for (h, w) in &line.combo {
                let e = slot.entry(h.clone()).or_default();
                *e = *e + *w * c;
            }
        }
    }
    let mut poly = CommPoly::default();
    for ((a, words), by_h) in &mut breakdown {
        by_h.retain(|_, w| !w.is_zero());
        for (h, w) in by_h.iter() {
            poly.add(*w * exact_limit(&HIndex::new(h)?), *a, words.clone());
        }
    }
    breakdown.retain(|_, b| !b.is_empty());
    let log = LogForm::from_poly(&poly);
    Ok(CommutativeLimit { poly, breakdown, log })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::{golden, HTerm};

    #[test]
    fn two_line_example() {
        // k^2 (-3 H11 + 6 H21 - 4 H31)(dk dk) + k^3 (-3/2 H11 + 7/2 H21 - 2 H31)(ddk)
        let dk = Factor::dk(&[SUM]);
        let f = CurvatureFunctional {
            prefactor: Coeff::one(),
            lines: vec![
                HTerm {
                    kpow: 2,
                    combo: vec![(vec![1, 1], Coeff::int(-3)), (vec![2, 1], Coeff::int(6)), (vec![3, 1], Coeff::int(-4))],
                    operands: vec![vec![dk.clone(), dk.clone()]],
                },
                HTerm {
                    kpow: 3,
                    combo: vec![(vec![1, 1], Coeff::frac(-3, 2)), (vec![2, 1], Coeff::frac(7, 2)), (vec![3, 1], Coeff::int(-2))],
                    operands: vec![vec![Factor::dk(&[SUM, SUM])]],
                },
            ],
        };
        let l = commutative_limit(&f).unwrap();
        let pi = |n, d| Coeff::new(num_rational::Rational64::new(n, d), 2);
        // -3/2 + 9/4 - 5/4 = -1/2
        assert_eq!(l.poly.coeff(2, &[DWord::k(&[SUM]), DWord::k(&[SUM])]), pi(-1, 2));
        // -3/4 + 21/16 - 5/8 = -1/16
        assert_eq!(l.poly.coeff(3, &[DWord::k(&[SUM, SUM])]), pi(-1, 16));
        assert!(l.log.is_some());
    }

    #[test]
    fn golden_theorem_limit() {
        let g = golden::theorem().unwrap();
        let l = commutative_limit(&g).unwrap();
        let log = l.log.unwrap();
        assert_eq!(log.to_string(), "-pi k^4 [di di log k] + pi k^4 [di log k] [di log k]");
    }
}
