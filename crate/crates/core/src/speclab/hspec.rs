use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Mode = [i32; 3];

/// Fourier data of a self-adjoint `h = sum_s c_s u^s`.
///
/// Text form: `;`-separated terms `<amp>:cos(a,b,c)` (`amp (u^s + u^-s)/2`)
/// or `<amp>:sin(a,b,c)` (`amp (u^s - u^-s)/(2i)`).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HSpec {
    terms: Vec<(f64, Wave, Mode)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wave {
    Cos,
    Sin,
}

impl HSpec {
    pub fn flat() -> Self {
        HSpec::default()
    }

    pub fn cos(mut self, amp: f64, s: Mode) -> Self {
        self.terms.push((amp, Wave::Cos, s));
        self
    }

    pub fn sin(mut self, amp: f64, s: Mode) -> Self {
        self.terms.push((amp, Wave::Sin, s));
        self
    }

    pub fn scaled(&self, f: f64) -> Self {
        HSpec { terms: self.terms.iter().map(|&(a, w, s)| (a * f, w, s)).collect() }
    }

    /// Coefficients `c_s`; `c_{-s} = conj(c_s)`.
    pub fn coefficients(&self) -> BTreeMap<Mode, Complex64> {
        let mut out: BTreeMap<Mode, Complex64> = BTreeMap::new();
        for &(a, w, s) in &self.terms {
            let c = match w {
                Wave::Cos => Complex64::new(a / 2.0, 0.0),
                Wave::Sin => Complex64::new(0.0, -a / 2.0),
            };
            *out.entry(s).or_default() += c;
            *out.entry(s.map(|x| -x)).or_default() += c.conj();
        }
        out.retain(|_, c| c.norm() > 0.0);
        out
    }

    /// Largest `|s|_inf` in the support.
    pub fn degree(&self) -> i32 {
        self.coefficients().keys().map(|s| s.iter().map(|x| x.abs()).max().unwrap_or(0)).max().unwrap_or(0)
    }

    pub fn is_flat(&self) -> bool {
        self.coefficients().is_empty()
    }
}

impl fmt::Display for HSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(a, w, s)| {
                let kind = match w {
                    Wave::Cos => "cos",
                    Wave::Sin => "sin",
                };
                format!("{a}:{kind}({},{},{})", s[0], s[1], s[2])
            })
            .collect();
        write!(f, "{}", parts.join(";"))
    }
}

impl FromStr for HSpec {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let err = |m: &str| Error::Parse(format!("h spec {text:?}: {m}"));
        let mut spec = HSpec::flat();
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (amp, wave) = part.split_once(':').ok_or_else(|| err("expected <amp>:<cos|sin>(a,b,c)"))?;
            let amp: f64 = amp.trim().parse().map_err(|_| err("bad amplitude"))?;
            let (kind, rest) = wave.trim().split_once('(').ok_or_else(|| err("missing mode"))?;
            let inner = rest.strip_suffix(')').ok_or_else(|| err("missing ')'"))?;
            let m: Vec<i32> = inner
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| err("bad mode")))
                .collect::<Result<_>>()?;
            let s: Mode = m.try_into().map_err(|_| err("mode needs three integers"))?;
            if s == [0, 0, 0] {
                return Err(err("the constant mode only rescales the metric; use a nonzero mode"));
            }
            spec = match kind.trim() {
                "cos" => spec.cos(amp, s),
                "sin" => spec.sin(amp, s),
                other => return Err(err(&format!("unknown wave {other:?}"))),
            };
        }
        Ok(spec)
    }
}
