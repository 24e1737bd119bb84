use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ncalg::{Coeff, Factor, Index, SUM};
use crate::symcalc::{Letter, SymbolSum};

use super::moments::normalized_moment;
use super::radial::{radial_terms, BrSum, RadialKey, RadialTerm};

/// Replaces each xi monomial by its normalized S^2 moment, evaluates at
/// `lambda = -1`, and includes the Jacobian `r^2`. Returns unordered terms
/// with concrete indices; the overall `4 pi / 3` is left out.
pub fn angular_average(terms: &SymbolSum) -> Result<Vec<(Coeff, u32, Vec<Letter>)>> {
    let mut out = Vec::new();
    for (key, c) in terms.iter() {
        let m = normalized_moment(key.xi)?;
        if m == 0.into() {
            continue;
        }
        let sign = if key.lam % 2 == 0 { Coeff::one() } else { -Coeff::one() };
        let p = (key.xi_degree() + 2) / 2;
        out.push((*c * Coeff::rational(m) * sign, p, key.word.clone()));
    }
    Ok(out)
}

fn key_indices(key: &RadialKey) -> Vec<Index> {
    let mut idx: Vec<Index> = key.operands.iter().flatten().flat_map(|f| f.indices().to_vec()).collect();
    idx.sort_unstable();
    idx.dedup();
    idx
}

fn to_sum_index(f: &Factor) -> Factor {
    match f {
        Factor::Mod { sixths, word } => Factor::Mod { sixths: *sixths, word: word.map_indices(|_| SUM) },
        other => other.clone(),
    }
}

/// Folds terms whose derivative indices are one repeated concrete index
/// into the summed index, checking that the three copies agree.
pub fn fold_sum_index(concrete: &BrSum) -> Result<BrSum> {
    let mut copies: BTreeMap<RadialKey, [Coeff; 3]> = BTreeMap::new();
    let mut out = BrSum::default();
    for t in concrete.iter() {
        match key_indices(&t.key).as_slice() {
            [] => out.add(t.coeff, t.key.clone()),
            [j] if *j != SUM => {
                let folded = t.key.map_factors(to_sum_index);
                copies.entry(folded).or_default()[*j as usize - 1] = t.coeff;
            }
            _ => return Err(Error::Asymmetric(format!("mixed derivative indices in {t}"))),
        }
    }
    for (key, [a, b, c]) in copies {
        if a != b || b != c {
            return Err(Error::Asymmetric(format!(
                "index copies of {} carry {a}, {b}, {c}",
                RadialTerm { coeff: Coeff::one(), key: key.clone() }
            )));
        }
        out.add(a, key);
    }
    Ok(out)
}

/// `b2` at `lambda = -1`, integrated over the sphere and normal-ordered:
/// the integrand `B(r)` of the radial integral, up to `4 pi / 3`.
pub fn to_br(b2: &SymbolSum) -> Result<BrSum> {
    let mut concrete = BrSum::default();
    for (c, p, letters) in angular_average(b2)? {
        for t in radial_terms(c, p, &letters) {
            concrete.add(t.coeff, t.key);
        }
    }
    fold_sum_index(&concrete)
}
