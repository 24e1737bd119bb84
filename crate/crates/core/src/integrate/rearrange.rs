use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ncalg::{sixths_str, Base, Coeff, DWord, Factor, Index, SUM};

use super::radial::{operands_text, signed, BrSum, RadialTerm};

/// One rearranged radial term:
/// `coeff * k^kpow * H_index(Delta_(1), Delta_(1) Delta_(2), ...)(rho_1 ... rho_l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rearranged {
    pub kpow: i32,
    pub coeff: Coeff,
    pub index: Vec<u32>,
    pub operands: Vec<Vec<Factor>>,
}

/// `int_0^inf r^(2p) k^a B^m0 rho_1 ... B^ml dr`, via `u = r^2`
/// (factor 1/2) and the rearrangement lemma (k-power `-4 sum m + 2`).
pub fn apply_rearrangement(t: &RadialTerm) -> Result<Rearranged> {
    let m = t.key.b_total();
    if t.key.p + 1 != m {
        return Err(Error::ExponentMismatch { r_power: 2 * t.key.p, b_total: m });
    }
    Ok(Rearranged {
        kpow: t.key.k_prefix - 4 * m as i32 + 2,
        coeff: t.coeff * Coeff::frac(1, 2),
        index: t.key.b.clone(),
        operands: t.key.operands.clone(),
    })
}

/// Coefficient convention of the emitted functional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Convention {
    /// Prefactor `-4 sqrt(pi) / 3`, line coefficients half of those in `B(r)`.
    #[default]
    Theorem,
    /// Prefactor `-2 sqrt(pi) / 3`, line coefficients equal to those in `B(r)`.
    Raw,
}

impl Convention {
    pub fn prefactor(self) -> Coeff {
        match self {
            Convention::Theorem => Coeff::new(Rational64::new(-4, 3), 1),
            Convention::Raw => Coeff::new(Rational64::new(-2, 3), 1),
        }
    }

    fn line_scale(self) -> Coeff {
        match self {
            Convention::Theorem => Coeff::one(),
            Convention::Raw => Coeff::int(2),
        }
    }
}

/// One line: `k^kpow (sum_c coeff_c H_c)(...)(rho_1 ... rho_l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HTerm {
    pub kpow: i32,
    pub combo: Vec<(Vec<u32>, Coeff)>,
    pub operands: Vec<Vec<Factor>>,
}

impl HTerm {
    pub fn sum_index(&self) -> bool {
        self.operands.iter().flatten().any(|f| f.indices().contains(&SUM))
    }

    pub fn arity(&self) -> usize {
        self.operands.len()
    }
}

/// Scalar curvature as `prefactor * sum of lines`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureFunctional {
    pub prefactor: Coeff,
    pub lines: Vec<HTerm>,
}

/// `-1/sqrt(pi) * 4 pi / 3 * 1/2 == -4 sqrt(pi) / 3 * 1/2`: the global factors
/// of the heat coefficient, the sphere, and the radial substitution.
pub fn prefactor_identity_holds() -> bool {
    let lhs = Coeff::new(Rational64::from_integer(-1), -1) * Coeff::new(Rational64::new(4, 3), 2) * Coeff::frac(1, 2);
    lhs == Convention::Theorem.prefactor() * Coeff::frac(1, 2) && lhs == Convention::Raw.prefactor()
}

/// Rearranges every term of `B(r)`, multiplies by the global `k^6`, and
/// collects equal operands into lines.
pub fn assemble_curvature(br: &BrSum, conv: Convention) -> Result<CurvatureFunctional> {
    assert!(prefactor_identity_holds());
    let mut groups: BTreeMap<(Vec<Vec<Factor>>, i32), BTreeMap<Vec<u32>, Coeff>> = BTreeMap::new();
    for t in br.iter() {
        let r = apply_rearrangement(&t)?;
        let e = groups.entry((r.operands, r.kpow + 6)).or_default().entry(r.index).or_default();
        *e = *e + r.coeff * conv.line_scale();
    }
    let lines = groups
        .into_iter()
        .filter_map(|((operands, kpow), combo)| {
            let combo: Vec<_> = combo.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            (!combo.is_empty()).then_some(HTerm { kpow, combo, operands })
        })
        .collect();
    Ok(CurvatureFunctional { prefactor: conv.prefactor(), lines })
}

impl CurvatureFunctional {
    /// Flattened `(kpow, operands, index) -> coefficient` map.
    pub fn contributions(&self) -> BTreeMap<(i32, Vec<Vec<Factor>>, Vec<u32>), Coeff> {
        let mut out: BTreeMap<_, Coeff> = BTreeMap::new();
        for l in &self.lines {
            for (h, c) in &l.combo {
                let e = out.entry((l.kpow, l.operands.clone(), h.clone())).or_default();
                *e = *e + *c;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(FunctionalJson::from(self)).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<CurvatureFunctional> {
        let j: FunctionalJson = serde_json::from_value(v.clone())?;
        j.try_into()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("prefactor {}\n", self.prefactor);
        for l in &self.lines {
            let combo: Vec<String> = l.combo.iter().map(|(h, c)| format!("{} H{:?}", signed(c), h)).collect();
            let _ = writeln!(s, "k^{} ({}) [{}]", l.kpow, combo.join(" "), operands_text(&l.operands));
        }
        s
    }

    pub fn to_latex(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "% overall factor {}", self.prefactor);
        let _ = writeln!(s, "\\begin{{align*}}");
        let _ = writeln!(s, "S &=");
        for (n, l) in self.lines.iter().enumerate() {
            let combo = latex_combo(&l.combo);
            let args = match l.arity() {
                1 => "(\\Delta_{(1)})".to_string(),
                2 => "(\\Delta_{(1)},\\Delta_{(1)}\\Delta_{(2)})".to_string(),
                n => format!("(\\Delta_{{(1)}},\\dots,\\Delta_{{(1)}}\\cdots\\Delta_{{({n})}})"),
            };
            let ops: Vec<String> = l.operands.iter().map(|r| r.iter().map(latex_factor).collect::<String>()).collect();
            let sep = if n + 1 == self.lines.len() { "" } else { " \\\\" };
            let _ = writeln!(s, "&\\quad +k^{{{}}}{combo}{args}\\left({}\\right){sep}", l.kpow, ops.join("\\,"));
        }
        let _ = writeln!(s, "\\end{{align*}}");
        s
    }
}

fn latex_coeff(c: &Coeff) -> String {
    let q = c.q();
    if *q.denom() == 1 {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn latex_combo(combo: &[(Vec<u32>, Coeff)]) -> String {
    let mut s = String::from("\\left(");
    for (n, (h, c)) in combo.iter().enumerate() {
        let txt = latex_coeff(c);
        let txt = match txt.as_str() {
            "1" => String::new(),
            "-1" => "-".into(),
            t => t.into(),
        };
        if n > 0 && !txt.starts_with('-') {
            s.push('+');
        }
        let idx: Vec<String> = h.iter().map(|m| m.to_string()).collect();
        let _ = write!(s, "{txt}H_{{{}}}", idx.join(","));
    }
    s.push_str("\\right)");
    s
}

fn latex_index(j: Index) -> String {
    if j == SUM {
        "i".into()
    } else {
        j.to_string()
    }
}

fn latex_factor(f: &Factor) -> String {
    match f {
        Factor::KPow(m) => format!("k^{{{m}}}"),
        Factor::Mod { sixths, word } => {
            let mut inner = match word.base {
                Base::K => "k".to_string(),
                Base::KInv => "k^{-1}".to_string(),
            };
            for &j in word.derivs() {
                inner = format!("\\delta_{}({inner})", latex_index(j));
            }
            if *sixths == 0 {
                inner
            } else {
                format!("\\Delta^{{{}}}({inner})", sixths_str(*sixths))
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FunctionalJson {
    prefactor: String,
    lines: Vec<LineJson>,
}

#[derive(Serialize, Deserialize)]
struct LineJson {
    kpow: i32,
    combo: Vec<ComboJson>,
    operands: Vec<OperandJson>,
    sum_index: bool,
}

#[derive(Serialize, Deserialize)]
struct ComboJson {
    h: Vec<u32>,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct OperandJson {
    mod_sixths: i32,
    derivs: Vec<Index>,
    base: Base,
    slot: usize,
}

impl From<&CurvatureFunctional> for FunctionalJson {
    fn from(f: &CurvatureFunctional) -> Self {
        FunctionalJson {
            prefactor: f.prefactor.to_string(),
            lines: f
                .lines
                .iter()
                .map(|l| LineJson {
                    kpow: l.kpow,
                    combo: l.combo.iter().map(|(h, c)| ComboJson { h: h.clone(), c: c.to_string() }).collect(),
                    operands: l
                        .operands
                        .iter()
                        .enumerate()
                        .flat_map(|(slot, rho)| {
                            rho.iter().map(move |f| match f {
                                Factor::Mod { sixths, word } => OperandJson {
                                    mod_sixths: *sixths,
                                    derivs: word.derivs().to_vec(),
                                    base: word.base,
                                    slot: slot + 1,
                                },
                                Factor::KPow(_) => unreachable!("operands hold derivative words only"),
                            })
                        })
                        .collect(),
                    sum_index: l.sum_index(),
                })
                .collect(),
        }
    }
}

impl TryFrom<FunctionalJson> for CurvatureFunctional {
    type Error = Error;

    fn try_from(j: FunctionalJson) -> Result<Self> {
        let prefactor = j.prefactor.parse()?;
        let mut lines = Vec::new();
        for l in j.lines {
            let mut operands: Vec<Vec<Factor>> = Vec::new();
            for o in l.operands {
                if o.slot == 0 || o.slot > operands.len() + 1 {
                    return Err(Error::Parse(format!("operand slot {} out of order", o.slot)));
                }
                if o.slot > operands.len() {
                    operands.push(Vec::new());
                }
                if o.derivs.is_empty() || o.derivs.iter().any(|&d| d > 3) {
                    return Err(Error::Parse(format!("bad derivative list {:?}", o.derivs)));
                }
                operands[o.slot - 1].push(Factor::modular(o.mod_sixths, DWord::new(o.base, &o.derivs)));
            }
            let mut combo = Vec::new();
            for c in l.combo {
                if c.h.len() != operands.len() + 1 {
                    return Err(Error::Parse(format!("H index {:?} does not fit {} operands", c.h, operands.len())));
                }
                combo.push((c.h, c.c.parse()?));
            }
            lines.push(HTerm { kpow: l.kpow, combo, operands });
        }
        Ok(CurvatureFunctional { prefactor, lines })
    }
}
