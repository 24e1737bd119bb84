use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ncalg::{parse_factor, signed_prefix, Base, Coeff, Factor, NCPoly, WordDisplay};
use crate::symcalc::Letter;

/// Normal-ordered radial term
/// `r^(2p) k^k_prefix B^b[0] rho_1 B^b[1] ... rho_l B^b[l]`,
/// where each `rho_j` is a nonempty product of (decorated) derivative words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RadialKey {
    pub p: u32,
    pub k_prefix: i32,
    pub b: Vec<u32>,
    pub operands: Vec<Vec<Factor>>,
}

impl RadialKey {
    pub fn b_total(&self) -> u32 {
        self.b.iter().sum()
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        if self.k_prefix != 0 {
            out.push(Letter::k(self.k_prefix));
        }
        for (j, &m) in self.b.iter().enumerate() {
            if m > 0 {
                out.push(Letter::B(m));
            }
            if let Some(rho) = self.operands.get(j) {
                out.extend(rho.iter().cloned().map(Letter::F));
            }
        }
        out
    }

    pub fn map_factors(&self, f: impl Fn(&Factor) -> Factor) -> RadialKey {
        RadialKey {
            p: self.p,
            k_prefix: self.k_prefix,
            b: self.b.clone(),
            operands: self.operands.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadialTerm {
    pub coeff: Coeff,
    pub key: RadialKey,
}

/// Normal-orders a letter word with all `k^-1` words already expanded.
fn structure(p: u32, letters: &[Letter]) -> RadialKey {
    let mut right = 0;
    let mut rev = Vec::with_capacity(letters.len());
    for l in letters.iter().rev() {
        match l {
            Letter::F(Factor::KPow(m)) => right += m,
            Letter::B(m) => rev.push(Letter::B(*m)),
            Letter::F(Factor::Mod { sixths, word }) => {
                rev.push(Letter::F(Factor::Mod { sixths: sixths + right, word: word.clone() }))
            }
        }
    }
    rev.reverse();
    let mut b = vec![0u32];
    let mut operands: Vec<Vec<Factor>> = Vec::new();
    let mut in_slot = false;
    for l in rev {
        match l {
            Letter::B(m) => {
                *b.last_mut().unwrap() += m;
                in_slot = false;
            }
            Letter::F(f) => {
                if !in_slot {
                    operands.push(Vec::new());
                    b.push(0);
                    in_slot = true;
                }
                operands.last_mut().unwrap().push(f);
            }
        }
    }
    RadialKey { p, k_prefix: right, b, operands }
}

/// Expands `k^-1` derivative words and normal-orders: `x k^n = k^n Delta^(n/6)(x)`,
/// with `B` commuting with `k`.
pub fn radial_terms(coeff: Coeff, p: u32, letters: &[Letter]) -> Vec<RadialTerm> {
    let mut partial: Vec<(Coeff, Vec<Letter>)> = vec![(coeff, Vec::new())];
    for l in letters {
        match l {
            Letter::F(f @ Factor::Mod { word, .. }) if word.base == Base::KInv => {
                let exp = NCPoly::monomial(Coeff::one(), vec![f.clone()]);
                let mut next = Vec::new();
                for (c, w) in &partial {
                    for (ew, ec) in exp.terms() {
                        let mut w = w.clone();
                        w.extend(ew.iter().cloned().map(Letter::F));
                        next.push((*c * *ec, w));
                    }
                }
                partial = next;
            }
            other => {
                for (_, w) in partial.iter_mut() {
                    w.push(other.clone());
                }
            }
        }
    }
    partial
        .into_iter()
        .map(|(c, w)| RadialTerm { coeff: c, key: structure(p, &w) })
        .collect()
}

/// Merged sum of normal-ordered radial terms: the integrand `B(r)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BrSum {
    pub terms: BTreeMap<RadialKey, Coeff>,
}

impl BrSum {
    pub fn add(&mut self, coeff: Coeff, key: RadialKey) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let s = *o.get() + coeff;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_letters(&mut self, coeff: Coeff, p: u32, letters: &[Letter]) {
        for t in radial_terms(coeff, p, letters) {
            self.add(t.coeff, t.key);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = RadialTerm> + '_ {
        self.terms.iter().map(|(k, c)| RadialTerm { coeff: *c, key: k.clone() })
    }

    /// Parses one term per line: `<coeff> r^<2p> <word>`; `#` starts a comment.
    /// Lines may use `[di k^-1]`; they are expanded and normal-ordered.
    pub fn parse(text: &str) -> Result<BrSum> {
        let mut out = BrSum::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (c, p, letters) = parse_radial_line(line).map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?;
            out.add_letters(c, p, &letters);
        }
        Ok(out)
    }
}

fn parse_letter(s: &str) -> Result<Letter> {
    let s = s.trim();
    if s == "B" {
        return Ok(Letter::B(1));
    }
    if let Some(m) = s.strip_prefix("B^") {
        return m.parse().map(Letter::B).map_err(|_| Error::Parse(format!("bad B power {s:?}")));
    }
    parse_factor(s).map(Letter::F)
}

/// Splits `<coeff> r^<2p> <word>` into its parts.
pub fn parse_radial_line(line: &str) -> Result<(Coeff, u32, Vec<Letter>)> {
    let mut it = line.splitn(3, ' ');
    let c: Coeff = it.next().unwrap_or("").parse()?;
    let r = it.next().ok_or_else(|| Error::Parse(format!("missing r power in {line:?}")))?;
    let two_p: u32 = r
        .strip_prefix("r^")
        .and_then(|e| e.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad r power {r:?}")))?;
    if two_p % 2 != 0 {
        return Err(Error::Parse(format!("odd r power {r:?}")));
    }
    let word = it.next().unwrap_or("1").trim();
    let letters = if word == "1" {
        Vec::new()
    } else {
        word.split(" . ").map(parse_letter).collect::<Result<Vec<_>>>()?
    };
    Ok((c, two_p / 2, letters))
}

pub(crate) fn letters_text(letters: &[Letter]) -> String {
    if letters.is_empty() {
        return "1".into();
    }
    letters.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" . ")
}

impl fmt::Display for RadialTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} r^{} {}", self.coeff, 2 * self.key.p, letters_text(&self.key.letters()))
    }
}

impl fmt::Display for BrSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in self.iter() {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Operands rendered as `rho_1 | rho_2 | ...`.
pub fn operands_text(ops: &[Vec<Factor>]) -> String {
    ops.iter().map(|r| WordDisplay(r).to_string()).collect::<Vec<_>>().join(" | ")
}

pub(crate) fn signed(c: &Coeff) -> String {
    let (s, m) = signed_prefix(c);
    format!("{s} {m}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::{DWord, SUM};

    #[test]
    fn normal_ordering_example() {
        // -2 r^6 b0 k dk b0^2 k^9 dk b0 -> -2 r^6 k^10 b0 D^(3/2)(dk) b0^2 dk b0
        let (c, p, l) = parse_radial_line("-2 r^6 B . k . [di k] . B^2 . k^9 . [di k] . B").unwrap();
        let t = radial_terms(c, p, &l);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].to_string(), "-2 r^6 k^10 . B . D^(3/2)[di k] . B^2 . [di k] . B");
        assert_eq!(t[0].key.b, vec![1, 2, 1]);
    }

    #[test]
    fn kinv_expansion() {
        // Delta^(1/3)(delta k^-1) = -k^-1 Delta^(1/3)(delta k) k^-1
        let (c, p, l) = parse_radial_line("-3 r^2 k^4 . B . D^(1/3)[di k^-1] . [di k] . B").unwrap();
        let t = radial_terms(c, p, &l);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].coeff, Coeff::int(3));
        assert_eq!(t[0].key.k_prefix, 2);
        assert_eq!(
            t[0].key.operands,
            vec![vec![Factor::modular(1, DWord::k(&[SUM])), Factor::dk(&[SUM])]]
        );
    }
}
