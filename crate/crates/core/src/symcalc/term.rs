use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncalg::{signed_prefix, Coeff, Factor};

/// One letter of a resolvent word: a power of the resolvent letter
/// `B = b0 = (k^4 |xi|^2 - lambda)^-1` or an algebra factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    B(u32),
    F(Factor),
}

impl Letter {
    pub fn k(m: i32) -> Letter {
        Letter::F(Factor::KPow(m))
    }
}

/// `B` commutes with k-powers and nothing else, so every maximal run of
/// `B`/k-power letters collapses to `k^a B^b`.
pub fn canonical_letters(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out = Vec::new();
    let (mut a, mut b) = (0i32, 0u32);
    let flush = |out: &mut Vec<Letter>, a: &mut i32, b: &mut u32| {
        if *a != 0 {
            out.push(Letter::k(*a));
        }
        if *b != 0 {
            out.push(Letter::B(*b));
        }
        *a = 0;
        *b = 0;
    };
    for l in letters {
        match l {
            Letter::B(m) => b += m,
            Letter::F(Factor::KPow(m)) => a += m,
            other => {
                flush(&mut out, &mut a, &mut b);
                out.push(other);
            }
        }
    }
    flush(&mut out, &mut a, &mut b);
    out
}

/// Monomial in `xi` and `lambda` times a resolvent word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermKey {
    pub xi: [u8; 3],
    pub lam: u8,
    pub word: Vec<Letter>,
}

impl TermKey {
    pub fn new(xi: [u8; 3], lam: u8, word: impl IntoIterator<Item = Letter>) -> Self {
        TermKey { xi, lam, word: canonical_letters(word) }
    }

    /// Symbol order `|xi| + 2 deg(lambda) - 2 (total B power)`.
    pub fn order(&self) -> i32 {
        let xi: i32 = self.xi.iter().map(|&e| e as i32).sum();
        xi + 2 * self.lam as i32 - 2 * self.b_total() as i32
    }

    pub fn b_total(&self) -> u32 {
        self.word.iter().map(|l| if let Letter::B(m) = l { *m } else { 0 }).sum()
    }

    pub fn xi_degree(&self) -> u32 {
        self.xi.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &TermKey) -> TermKey {
        TermKey {
            xi: [self.xi[0] + other.xi[0], self.xi[1] + other.xi[1], self.xi[2] + other.xi[2]],
            lam: self.lam + other.lam,
            word: canonical_letters(self.word.iter().chain(other.word.iter()).cloned()),
        }
    }

    pub fn has_decorations(&self) -> bool {
        self.word.iter().any(|l| matches!(l, Letter::F(f) if f.is_decorated()))
    }
}

/// A coefficient together with its key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResTerm {
    pub coeff: Coeff,
    pub key: TermKey,
}

impl ResTerm {
    pub fn order(&self) -> i32 {
        self.key.order()
    }
}

/// Canonically merged sum of resolvent terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolSum {
    terms: BTreeMap<TermKey, Coeff>,
}

impl SymbolSum {
    pub fn zero() -> Self {
        SymbolSum::default()
    }

    pub fn single(coeff: Coeff, key: TermKey) -> Self {
        let mut s = SymbolSum::zero();
        s.add(coeff, key);
        s
    }

    pub fn one() -> Self {
        Self::single(Coeff::one(), TermKey::new([0; 3], 0, []))
    }

    pub fn add(&mut self, coeff: Coeff, key: TermKey) {
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

    pub fn extend(&mut self, other: &SymbolSum) {
        for (k, c) in &other.terms {
            self.add(*c, k.clone());
        }
    }

    pub fn extend_scaled(&mut self, other: &SymbolSum, c: Coeff) {
        for (k, x) in &other.terms {
            self.add(*x * c, k.clone());
        }
    }

    pub fn scale(&self, c: Coeff) -> SymbolSum {
        let mut out = SymbolSum::zero();
        out.extend_scaled(self, c);
        out
    }

    pub fn mul(&self, other: &SymbolSum) -> SymbolSum {
        let mut out = SymbolSum::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                out.add(*ca * *cb, ka.mul(kb));
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TermKey, &Coeff)> {
        self.terms.iter()
    }

    pub fn terms(&self) -> impl Iterator<Item = ResTerm> + '_ {
        self.terms.iter().map(|(k, c)| ResTerm { coeff: *c, key: k.clone() })
    }

    pub fn coeff_of(&self, key: &TermKey) -> Coeff {
        self.terms.get(key).copied().unwrap_or_default()
    }

    /// Terms free of derivative words: the symbol for a constant conformal factor.
    pub fn flat(&self) -> SymbolSum {
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| !k.word.iter().any(|l| matches!(l, Letter::F(Factor::Mod { .. }))))
            .map(|(k, c)| (k.clone(), *c))
            .collect();
        SymbolSum { terms }
    }

    /// Splits into homogeneous parts by order.
    pub fn by_order(&self) -> SymbolExpansion {
        let mut out = SymbolExpansion::default();
        for (k, c) in &self.terms {
            out.parts.entry(k.order()).or_default().add(*c, k.clone());
        }
        out
    }

    /// Checks that every term has the given order.
    pub fn check_order(&self, expected: i32) -> Result<()> {
        for (k, c) in &self.terms {
            if k.order() != expected {
                return Err(Error::Grading {
                    term: ResTerm { coeff: *c, key: k.clone() }.to_string(),
                    actual: k.order(),
                    expected,
                });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.terms().map(|t| serde_json::to_value(TermJson::from(&t)).unwrap()).collect())
    }
}

/// Symbol split into homogeneous parts, keyed by order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolExpansion {
    pub parts: BTreeMap<i32, SymbolSum>,
}

impl SymbolExpansion {
    pub fn part(&self, order: i32) -> SymbolSum {
        self.parts.get(&order).cloned().unwrap_or_default()
    }

    /// Inserts a homogeneous part, enforcing the grading.
    pub fn insert(&mut self, order: i32, part: SymbolSum) -> Result<()> {
        part.check_order(order)?;
        self.parts.entry(order).or_default().extend(&part);
        Ok(())
    }

    pub fn total(&self) -> SymbolSum {
        let mut s = SymbolSum::zero();
        for p in self.parts.values() {
            s.extend(p);
        }
        s
    }

    pub fn from_parts(parts: impl IntoIterator<Item = SymbolSum>) -> Result<SymbolExpansion> {
        let mut total = SymbolSum::zero();
        for p in parts {
            total.extend(&p);
        }
        Ok(total.by_order())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::B(1) => write!(f, "B"),
            Letter::B(m) => write!(f, "B^{m}"),
            Letter::F(x) => write!(f, "{x}"),
        }
    }
}

pub(crate) fn xi_str(xi: &[u8; 3], lam: u8) -> String {
    let mut parts = Vec::new();
    for (i, e) in xi.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("x{}", i + 1)),
            e => parts.push(format!("x{}^{e}", i + 1)),
        }
    }
    match lam {
        0 => {}
        1 => parts.push("L".into()),
        e => parts.push(format!("L^{e}")),
    }
    parts.join(" ")
}

pub(crate) fn letters_str(word: &[Letter]) -> String {
    if word.is_empty() {
        return "1".into();
    }
    word.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" . ")
}

impl fmt::Display for ResTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let xi = xi_str(&self.key.xi, self.key.lam);
        if xi.is_empty() {
            write!(f, "{} {}", self.coeff, letters_str(&self.key.word))
        } else {
            write!(f, "{} {} {}", self.coeff, xi, letters_str(&self.key.word))
        }
    }
}

impl fmt::Display for SymbolSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return writeln!(f, "0");
        }
        for t in self.terms() {
            let (s, m) = signed_prefix(&t.coeff);
            writeln!(f, "{s} {}", ResTerm { coeff: m, key: t.key })?;
        }
        Ok(())
    }
}

impl fmt::Display for SymbolExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (o, p) in self.parts.iter().rev() {
            writeln!(f, "# order {o} ({} terms)", p.len())?;
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: String,
    xi: [u8; 3],
    lambda: u8,
    word: Vec<String>,
}

impl From<&ResTerm> for TermJson {
    fn from(t: &ResTerm) -> Self {
        TermJson {
            coeff: t.coeff.to_string(),
            xi: t.key.xi,
            lambda: t.key.lam,
            word: t.key.word.iter().map(|l| l.to_string()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::Factor;

    #[test]
    fn runs_collapse_around_factors() {
        let w = canonical_letters([
            Letter::B(1),
            Letter::k(2),
            Letter::B(1),
            Letter::F(Factor::dk(&[1])),
            Letter::k(-1),
            Letter::k(1),
            Letter::B(2),
        ]);
        assert_eq!(w, vec![Letter::k(2), Letter::B(2), Letter::F(Factor::dk(&[1])), Letter::B(2)]);
    }

    #[test]
    fn order_counts_lambda_and_b() {
        let k = TermKey::new([2, 0, 1], 1, [Letter::B(3)]);
        assert_eq!(k.order(), 3 + 2 - 6);
    }
}
