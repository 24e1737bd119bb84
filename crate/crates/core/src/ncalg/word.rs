use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Derivative index. `1..=3` are concrete directions; [`SUM`] is the
/// implicitly summed index `i` (all summed occurrences in one monomial share it).
pub type Index = u8;

/// Marker for the summed derivative index.
pub const SUM: Index = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Base {
    #[serde(rename = "k")]
    K,
    /// Only produced by parsing; canonicalization expands it away.
    #[serde(rename = "k^-1")]
    KInv,
}

/// A nonempty derivative word `delta_{j1} ... delta_{jn}(base)`.
///
/// The derivations commute, so indices are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DWord {
    pub base: Base,
    derivs: SmallVec<[Index; 4]>,
}

impl DWord {
    pub fn new(base: Base, derivs: &[Index]) -> Self {
        assert!(!derivs.is_empty(), "a DWord needs at least one derivative");
        assert!(derivs.iter().all(|&j| j <= 3), "derivative index out of range");
        let mut d: SmallVec<[Index; 4]> = derivs.into();
        d.sort_unstable();
        DWord { base, derivs: d }
    }

    pub fn k(derivs: &[Index]) -> Self {
        Self::new(Base::K, derivs)
    }

    pub fn derivs(&self) -> &[Index] {
        &self.derivs
    }

    pub fn order(&self) -> usize {
        self.derivs.len()
    }

    pub fn with_delta(&self, j: Index) -> Self {
        let mut d = self.derivs.clone();
        d.push(j);
        d.sort_unstable();
        DWord { base: self.base, derivs: d }
    }

    pub fn map_indices(&self, f: impl Fn(Index) -> Index) -> Self {
        let d: Vec<Index> = self.derivs.iter().map(|&j| f(j)).collect();
        Self::new(self.base, &d)
    }
}

/// One letter of a noncommutative word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    /// `k^m`, `m != 0`.
    KPow(i32),
    /// `Delta^(sixths/6)(word)`.
    Mod { sixths: i32, word: DWord },
}

impl Factor {
    pub fn dk(derivs: &[Index]) -> Self {
        Factor::Mod { sixths: 0, word: DWord::k(derivs) }
    }

    pub fn modular(sixths: i32, word: DWord) -> Self {
        Factor::Mod { sixths, word }
    }

    pub fn is_decorated(&self) -> bool {
        matches!(self, Factor::Mod { sixths, .. } if *sixths != 0)
    }

    pub fn indices(&self) -> &[Index] {
        match self {
            Factor::KPow(_) => &[],
            Factor::Mod { word, .. } => word.derivs(),
        }
    }
}

pub type Word = Vec<Factor>;

/// Merges adjacent k-powers and drops `k^0`.
pub fn canonical_word(word: impl IntoIterator<Item = Factor>) -> Word {
    let mut out: Word = Vec::new();
    for f in word {
        match f {
            Factor::KPow(0) => {}
            Factor::KPow(m) => match out.last_mut() {
                Some(Factor::KPow(prev)) => {
                    *prev += m;
                    if *prev == 0 {
                        out.pop();
                    }
                }
                _ => out.push(Factor::KPow(m)),
            },
            other => out.push(other),
        }
    }
    out
}

/// Formats `sixths/6` as `1/6`, `1/2`, `1`, `3/2`, `-1/6`.
pub fn sixths_str(sixths: i32) -> String {
    let g = sixths.gcd(&6);
    let (n, d) = (sixths / g, 6 / g);
    if d == 1 {
        format!("{n}")
    } else {
        format!("{n}/{d}")
    }
}

fn parse_sixths(s: &str) -> Result<i32> {
    let err = || Error::Parse(format!("bad modular exponent {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i32>().map_err(|_| err())?, d.trim().parse::<i32>().map_err(|_| err())?),
        None => (s.trim().parse::<i32>().map_err(|_| err())?, 1),
    };
    if d == 0 || (6 * n) % d != 0 {
        return Err(err());
    }
    Ok(6 * n / d)
}

impl fmt::Display for DWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for j in &self.derivs {
            if *j == SUM {
                write!(f, "di ")?;
            } else {
                write!(f, "d{j} ")?;
            }
        }
        match self.base {
            Base::K => write!(f, "k]"),
            Base::KInv => write!(f, "k^-1]"),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::KPow(1) => write!(f, "k"),
            Factor::KPow(m) => write!(f, "k^{m}"),
            Factor::Mod { sixths: 0, word } => write!(f, "{word}"),
            Factor::Mod { sixths, word } => write!(f, "D^({}){word}", sixths_str(*sixths)),
        }
    }
}

pub struct WordDisplay<'a>(pub &'a [Factor]);

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (n, x) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, " . ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

fn parse_dword(s: &str) -> Result<DWord> {
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("bad derivative word {s:?}")))?;
    let toks: Vec<&str> = inner.split_whitespace().collect();
    let (base_tok, deriv_toks) = toks
        .split_last()
        .ok_or_else(|| Error::Parse(format!("empty derivative word {s:?}")))?;
    let base = match *base_tok {
        "k" => Base::K,
        "k^-1" => Base::KInv,
        other => return Err(Error::Parse(format!("unknown base {other:?}"))),
    };
    let mut derivs = Vec::new();
    for t in deriv_toks {
        let j = match *t {
            "di" | "dj" => SUM,
            "d1" => 1,
            "d2" => 2,
            "d3" => 3,
            other => return Err(Error::Parse(format!("unknown derivative {other:?}"))),
        };
        derivs.push(j);
    }
    if derivs.is_empty() {
        return Err(Error::Parse(format!("derivative word without derivatives {s:?}")));
    }
    Ok(DWord::new(base, &derivs))
}

/// Parses one factor: `k^3`, `k^-1`, `k`, `[d1 d2 k]`, `D^(5/6)[di k]`.
pub fn parse_factor(s: &str) -> Result<Factor> {
    let s = s.trim();
    if s == "k" {
        return Ok(Factor::KPow(1));
    }
    if let Some(exp) = s.strip_prefix("k^") {
        let m: i32 = exp
            .trim_start_matches('(')
            .trim_end_matches(')')
            .parse()
            .map_err(|_| Error::Parse(format!("bad k power {s:?}")))?;
        return Ok(Factor::KPow(m));
    }
    if let Some(rest) = s.strip_prefix("D^(") {
        let (exp, dw) = rest
            .split_once(')')
            .ok_or_else(|| Error::Parse(format!("bad modular factor {s:?}")))?;
        return Ok(Factor::Mod { sixths: parse_sixths(exp)?, word: parse_dword(dw.trim())? });
    }
    if s.starts_with('[') {
        return Ok(Factor::Mod { sixths: 0, word: parse_dword(s)? });
    }
    Err(Error::Parse(format!("unknown factor {s:?}")))
}

/// Parses a ` . `-separated word; `1` is the empty word.
pub fn parse_word(s: &str) -> Result<Word> {
    let s = s.trim();
    if s == "1" {
        return Ok(Vec::new());
    }
    s.split(" . ").map(parse_factor).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_and_parse() {
        let w = vec![
            Factor::KPow(3),
            Factor::modular(5, DWord::k(&[1])),
            Factor::dk(&[2, 2]),
        ];
        let s = WordDisplay(&w).to_string();
        assert_eq!(s, "k^3 . D^(5/6)[d1 k] . [d2 d2 k]");
        assert_eq!(parse_word(&s).unwrap(), w);
    }

    #[test]
    fn derivations_commute() {
        assert_eq!(DWord::k(&[2, 1]), DWord::k(&[1, 2]));
    }

    #[test]
    fn kpow_merge() {
        let w = canonical_word([Factor::KPow(2), Factor::KPow(-2), Factor::dk(&[1]), Factor::KPow(1)]);
        assert_eq!(w, vec![Factor::dk(&[1]), Factor::KPow(1)]);
    }

    #[test]
    fn sixths_render() {
        assert_eq!(sixths_str(3), "1/2");
        assert_eq!(sixths_str(6), "1");
        assert_eq!(sixths_str(9), "3/2");
        assert_eq!(sixths_str(-1), "-1/6");
        assert_eq!(parse_sixths("3/2").unwrap(), 9);
    }
}
