use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::coeff::{signed_prefix, Coeff};
use super::word::{canonical_word, Base, DWord, Factor, Index, Word, WordDisplay, SUM};
use crate::error::{Error, Result};

/// A single coefficient-times-word term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: Coeff,
    pub word: Word,
}

impl Monomial {
    /// True when some derivative index is the summed index `i`.
    pub fn has_sum_index(&self) -> bool {
        self.word.iter().any(|f| f.indices().contains(&SUM))
    }
}

/// Exact noncommutative polynomial in `k^{+-1}` and (modular-twisted)
/// derivative words of `k`, stored as a canonical word -> coefficient map.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NCPoly {
    terms: BTreeMap<Word, Coeff>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        Self::monomial(Coeff::one(), Vec::new())
    }

    pub fn constant(c: Coeff) -> Self {
        Self::monomial(c, Vec::new())
    }

    pub fn k_pow(m: i32) -> Self {
        Self::monomial(Coeff::one(), vec![Factor::KPow(m)])
    }

    /// `delta_{j1}...delta_{jn}(k)`.
    pub fn dk(derivs: &[Index]) -> Self {
        Self::monomial(Coeff::one(), vec![Factor::dk(derivs)])
    }

    /// Builds a polynomial from one term, expanding any `k^-1` derivative words.
    pub fn monomial(coeff: Coeff, word: Word) -> Self {
        let mut p = NCPoly::zero();
        p.add_term(coeff, word);
        p
    }

    pub fn from_factor(f: Factor) -> Self {
        Self::monomial(Coeff::one(), vec![f])
    }

    /// Adds `coeff * word`; the word is canonicalized (and `k^-1` words expanded).
    pub fn add_term(&mut self, coeff: Coeff, word: Word) {
        if coeff.is_zero() {
            return;
        }
        if word.iter().any(|f| matches!(f, Factor::Mod { word, .. } if word.base == Base::KInv)) {
            let expanded = expand_kinv_word(&word).scale(coeff);
            for (w, c) in expanded.terms {
                self.add_canonical(c, w);
            }
            return;
        }
        self.add_canonical(coeff, canonical_word(word));
    }

    fn add_canonical(&mut self, coeff: Coeff, word: Word) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(word) {
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Coeff)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|(w, c)| Monomial { coeff: *c, word: w.clone() })
    }

    pub fn coeff_of(&self, word: &[Factor]) -> Coeff {
        self.terms.get(word).copied().unwrap_or_default()
    }

    pub fn scale(&self, c: Coeff) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        NCPoly { terms: self.terms.iter().map(|(w, x)| (w.clone(), *x * c)).collect() }
    }

    /// Applies the derivation `delta_j` (Leibniz rule over every factor).
    ///
    /// Decorated factors are rejected: `delta_j` does not commute with the
    /// modular operator.
    pub fn apply_delta(&self, j: Index) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (word, c) in &self.terms {
            for (pos, f) in word.iter().enumerate() {
                let d = delta_factor(j, f)?;
                for (dw, dc) in d.terms {
                    let mut w = Vec::with_capacity(word.len() + dw.len());
                    w.extend_from_slice(&word[..pos]);
                    w.extend(dw);
                    w.extend_from_slice(&word[pos + 1..]);
                    out.add_canonical(*c * dc, canonical_word(w));
                }
            }
        }
        Ok(out)
    }

    /// Applies `Delta^(sixths/6)`: fixes k-powers, shifts every modular exponent.
    pub fn apply_modular(&self, sixths: i32) -> NCPoly {
        if sixths == 0 {
            return self.clone();
        }
        let mut out = NCPoly::zero();
        for (word, c) in &self.terms {
            let w = word
                .iter()
                .map(|f| match f {
                    Factor::KPow(m) => Factor::KPow(*m),
                    Factor::Mod { sixths: s, word } => Factor::Mod { sixths: s + sixths, word: word.clone() },
                })
                .collect();
            out.add_canonical(*c, w);
        }
        out
    }

    /// Moves every k-power to the front using `x k^n = k^n Delta^(n/6)(x)`.
    pub fn normal_order(&self) -> NCPoly {
        let mut out = NCPoly::zero();
        for (word, c) in &self.terms {
            out.add_canonical(*c, normal_order_word(word));
        }
        out
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.terms.keys().all(|w| w.iter().skip(1).all(|f| matches!(f, Factor::Mod { .. })))
    }

    /// True when no factor carries a nonzero modular exponent.
    pub fn is_undecorated(&self) -> bool {
        self.terms.keys().all(|w| w.iter().all(|f| !f.is_decorated()))
    }

    /// Replaces the summed index by each of 1, 2, 3 and adds the three copies.
    pub fn expand_sum_index(&self) -> NCPoly {
        let mut out = NCPoly::zero();
        for (word, c) in &self.terms {
            let has_sum = word.iter().any(|f| f.indices().contains(&SUM));
            if !has_sum {
                out.add_canonical(*c, word.clone());
                continue;
            }
            for j in 1..=3 {
                out.add_canonical(*c, substitute_index(word, SUM, j));
            }
        }
        out
    }

    /// Drops modular decorations and lets all factors commute.
    pub fn commutative_image(&self) -> CommPoly {
        let mut out = CommPoly::default();
        for (word, c) in &self.terms {
            let mut kpow = 0;
            let mut dwords = Vec::new();
            for f in word {
                match f {
                    Factor::KPow(m) => kpow += m,
                    Factor::Mod { word, .. } => dwords.push(word.clone()),
                }
            }
            out.add(*c, kpow, dwords);
        }
        out
    }
}

pub(crate) fn substitute_index(word: &[Factor], from: Index, to: Index) -> Word {
    word.iter()
        .map(|f| match f {
            Factor::Mod { sixths, word } => Factor::Mod {
                sixths: *sixths,
                word: word.map_indices(|i| if i == from { to } else { i }),
            },
            other => other.clone(),
        })
        .collect()
}

/// `x k^n = k^n Delta^(n/6)(x)`: each modular factor picks up the total
/// k-exponent standing to its right.
pub fn normal_order_word(word: &[Factor]) -> Word {
    let mut right = 0;
    let mut mods = Vec::with_capacity(word.len());
    for f in word.iter().rev() {
        match f {
            Factor::KPow(m) => right += m,
            Factor::Mod { sixths, word } => mods.push(Factor::Mod { sixths: sixths + right, word: word.clone() }),
        }
    }
    mods.reverse();
    let mut out = Vec::with_capacity(mods.len() + 1);
    if right != 0 {
        out.push(Factor::KPow(right));
    }
    out.extend(mods);
    out
}

fn delta_factor(j: Index, f: &Factor) -> Result<NCPoly> {
    match f {
        Factor::Mod { sixths, word } if *sixths != 0 => Err(Error::ModularDelta(format!(
            "{} under delta_{j}",
            Factor::Mod { sixths: *sixths, word: word.clone() }
        ))),
        Factor::Mod { word, .. } => match word.base {
            Base::K => Ok(NCPoly::from_factor(Factor::Mod { sixths: 0, word: word.with_delta(j) })),
            Base::KInv => expand_kinv_dword(word).apply_delta(j),
        },
        Factor::KPow(m) => Ok(delta_kpow(j, *m)),
    }
}

/// `delta_j(k^m)` expanded in the canonical alphabet.
fn delta_kpow(j: Index, m: i32) -> NCPoly {
    let mut out = NCPoly::zero();
    let dk = Factor::dk(&[j]);
    if m > 0 {
        for i in 0..m {
            out.add_canonical(Coeff::one(), canonical_word([Factor::KPow(i), dk.clone(), Factor::KPow(m - 1 - i)]));
        }
    } else {
        // delta(k^-n) = sum_i k^-i delta(k^-1) k^-(n-1-i), delta(k^-1) = -k^-1 delta(k) k^-1
        let n = -m;
        for i in 0..n {
            out.add_canonical(-Coeff::one(), canonical_word([Factor::KPow(-i - 1), dk.clone(), Factor::KPow(-(n - i))]));
        }
    }
    out
}

/// `delta_{j1..jn}(k^-1)` rewritten through `delta(k^-1) = -k^-1 delta(k) k^-1`.
fn expand_kinv_dword(word: &DWord) -> NCPoly {
    let mut p = NCPoly::k_pow(-1);
    for &j in word.derivs() {
        p = p.apply_delta(j).expect("undecorated");
    }
    p
}

fn expand_kinv_word(word: &[Factor]) -> NCPoly {
    let mut acc = NCPoly::one();
    for f in word {
        let piece = match f {
            Factor::Mod { sixths, word } if word.base == Base::KInv => expand_kinv_dword(word).apply_modular(*sixths),
            other => NCPoly::from_factor(other.clone()),
        };
        acc = &acc * &piece;
    }
    acc
}

impl Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_canonical(*c, w.clone());
        }
        out
    }
}

impl Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        self + &(-rhs)
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        self.scale(-Coeff::one())
    }
}

impl Mul for &NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                let w = canonical_word(wa.iter().chain(wb.iter()).cloned());
                out.add_canonical(*ca * *cb, w);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for NCPoly {
            type Output = NCPoly;
            fn $m(self, rhs: NCPoly) -> NCPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (w, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = signed_prefix(c);
            match (n, sign) {
                (0, '-') => write!(f, "-")?,
                (0, _) => {}
                (_, s) => write!(f, " {s} ")?,
            }
            if mag == Coeff::one() {
                write!(f, "{}", WordDisplay(w))?;
            } else if w.is_empty() {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag} {}", WordDisplay(w))?;
            }
        }
        Ok(())
    }
}

/// Commutative polynomial: `k^kpow` times a multiset of derivative words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommPoly {
    terms: BTreeMap<(i32, Vec<DWord>), Coeff>,
}

impl CommPoly {
    pub fn add(&mut self, c: Coeff, kpow: i32, mut dwords: Vec<DWord>) {
        if c.is_zero() {
            return;
        }
        dwords.sort();
        let key = (kpow, dwords);
        let s = self.terms.get(&key).copied().unwrap_or_default() + c;
        if s.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, s);
        }
    }

    pub fn merge(&mut self, other: &CommPoly) {
        for ((k, d), c) in &other.terms {
            self.add(*c, *k, d.clone());
        }
    }

    pub fn scale(&self, c: Coeff) -> CommPoly {
        let mut out = CommPoly::default();
        for ((k, d), x) in &self.terms {
            out.add(*x * c, *k, d.clone());
        }
        out
    }

    pub fn coeff(&self, kpow: i32, dwords: &[DWord]) -> Coeff {
        let mut d = dwords.to_vec();
        d.sort();
        self.terms.get(&(kpow, d)).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &[DWord], Coeff)> {
        self.terms.iter().map(|((k, d), c)| (*k, d.as_slice(), *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, ((k, d), c)) in self.terms.iter().enumerate() {
            let (sign, mag) = signed_prefix(c);
            match (n, sign) {
                (0, '-') => write!(f, "-")?,
                (0, _) => {}
                (_, s) => write!(f, " {s} ")?,
            }
            write!(f, "{mag}")?;
            if *k != 0 {
                write!(f, " k^{k}")?;
            }
            for w in d {
                write!(f, " {w}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::word::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn p(s: &str) -> NCPoly {
        NCPoly::monomial(Coeff::one(), w(s))
    }

    #[test]
    fn identity_and_exponent_merge() {
        let x = p("k^2 . [d1 k] . k^-1");
        assert_eq!(&NCPoly::one() * &x, x);
        assert_eq!(&NCPoly::k_pow(2) * &NCPoly::k_pow(-2), NCPoly::one());
    }

    #[test]
    fn product_then_order() {
        let prod = &p("k . [d1 k]") * &NCPoly::k_pow(3);
        assert_eq!(prod, p("k . [d1 k] . k^3"));
        assert_eq!(prod.normal_order(), p("k^4 . D^(1/2)[d1 k]"));
    }

    #[test]
    fn delta_basics() {
        assert!(NCPoly::one().apply_delta(1).unwrap().is_zero());
        assert_eq!(NCPoly::k_pow(2).apply_delta(1).unwrap(), &p("[d1 k] . k") + &p("k . [d1 k]"));
        assert_eq!(NCPoly::k_pow(-1).apply_delta(1).unwrap(), p("k^-1 . [d1 k] . k^-1").scale(-Coeff::one()));
    }

    #[test]
    fn delta_of_inverse_is_forced() {
        // delta(k k^-1) = 0 must hold term-by-term after expansion
        let d = (&NCPoly::k_pow(1) * &NCPoly::k_pow(-1)).apply_delta(2).unwrap();
        assert!(d.is_zero());
        let kinv = NCPoly::k_pow(-1);
        let lhs = &NCPoly::k_pow(1).apply_delta(2).unwrap() * &kinv;
        let rhs = &NCPoly::k_pow(1) * &kinv.apply_delta(2).unwrap();
        assert!((&lhs + &rhs).is_zero());
    }

    #[test]
    fn kinv_words_expand() {
        let q = p("[d1 k^-1]");
        assert_eq!(q, p("k^-1 . [d1 k] . k^-1").scale(-Coeff::one()));
        let q = p("D^(1/3)[d1 k^-1]");
        assert_eq!(q, p("k^-1 . D^(1/3)[d1 k] . k^-1").scale(-Coeff::one()));
    }

    #[test]
    fn delta_rejects_decorations() {
        let q = p("D^(1/2)[d1 k]");
        assert!(matches!(q.apply_delta(1), Err(Error::ModularDelta(_))));
    }

    #[test]
    fn modular_composition() {
        assert_eq!(p("[d1 k]").apply_modular(0), p("[d1 k]"));
        assert_eq!(p("D^(1/3)[d1 k]").apply_modular(3), p("D^(5/6)[d1 k]"));
        assert_eq!(NCPoly::k_pow(5).apply_modular(2), NCPoly::k_pow(5));
    }

    #[test]
    fn normal_order_examples() {
        assert_eq!(p("[d1 k] . k^3").normal_order(), p("k^3 . D^(1/2)[d1 k]"));
        assert_eq!(p("k^2 . [d1 k]").normal_order(), p("k^2 . [d1 k]"));
        assert_eq!(p("[d1 k] . k^6 . [d2 k]").normal_order(), p("k^6 . D^(1)[d1 k] . [d2 k]"));
    }

    #[test]
    fn commutative_collapse() {
        let q = &p("D^(5/6)[di k] . [di k]") + &p("[di k] . D^(5/6)[di k]");
        let c = q.commutative_image();
        assert_eq!(c.len(), 1);
        assert_eq!(c.coeff(0, &[DWord::k(&[SUM]), DWord::k(&[SUM])]), Coeff::int(2));
        let c = p("k^3 . D^(1/2)[d1 k]").commutative_image();
        assert_eq!(c.coeff(3, &[DWord::k(&[1])]), Coeff::one());
    }

    #[test]
    fn sum_index_expansion() {
        let q = p("[di k] . [di k]").expand_sum_index();
        assert_eq!(q.len(), 3);
        assert!(q.terms().all(|(w, _)| w[0] == w[1]));
    }
}
