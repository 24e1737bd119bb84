use std::collections::HashMap;

use crate::error::Result;
use crate::ncalg::{Coeff, Factor, Index, NCPoly};

use super::term::{Letter, SymbolExpansion, SymbolSum, TermKey};

/// `d/dxi_i` of a single term.
fn d_xi_term(i: usize, coeff: Coeff, key: &TermKey, out: &mut SymbolSum) {
    if key.xi[i] > 0 {
        let mut xi = key.xi;
        xi[i] -= 1;
        out.add(coeff * Coeff::int(key.xi[i] as i64), TermKey { xi, lam: key.lam, word: key.word.clone() });
    }
    // d/dxi_i B^m = -2 m xi_i k^4 B^(m+1)
    for (pos, l) in key.word.iter().enumerate() {
        if let Letter::B(m) = l {
            let mut xi = key.xi;
            xi[i] += 1;
            let mut w = key.word[..pos].to_vec();
            w.push(Letter::k(4));
            w.push(Letter::B(m + 1));
            w.extend_from_slice(&key.word[pos + 1..]);
            out.add(coeff * Coeff::int(-2 * *m as i64), TermKey::new(xi, key.lam, w));
        }
    }
}

/// `delta_j` of a single term (product rule over the letters).
fn d_delta_term(j: Index, coeff: Coeff, key: &TermKey, out: &mut SymbolSum) -> Result<()> {
    for (pos, l) in key.word.iter().enumerate() {
        let (pre, post) = (&key.word[..pos], &key.word[pos + 1..]);
        match l {
            Letter::B(m) => {
                // delta(B^m) = -|xi|^2 sum_t B^(t+1) delta(k^4) B^(m-t)
                for t in 0..*m {
                    for s in 0..4 {
                        let mut w = pre.to_vec();
                        w.extend([
                            Letter::B(t + 1),
                            Letter::k(s),
                            Letter::F(Factor::dk(&[j])),
                            Letter::k(3 - s),
                            Letter::B(m - t),
                        ]);
                        w.extend_from_slice(post);
                        let w = super::term::canonical_letters(w);
                        for i in 0..3 {
                            let mut xi = key.xi;
                            xi[i] += 2;
                            out.add(-coeff, TermKey { xi, lam: key.lam, word: w.clone() });
                        }
                    }
                }
            }
            Letter::F(f) => {
                let d = NCPoly::from_factor(f.clone()).apply_delta(j)?;
                for (dw, c) in d.terms() {
                    let mut w = pre.to_vec();
                    w.extend(dw.iter().cloned().map(Letter::F));
                    w.extend_from_slice(post);
                    out.add(coeff * *c, TermKey::new(key.xi, key.lam, w));
                }
            }
        }
    }
    Ok(())
}

impl SymbolSum {
    pub fn d_xi(&self, i: Index) -> SymbolSum {
        assert!((1..=3).contains(&i), "xi derivative needs a concrete index");
        let mut out = SymbolSum::zero();
        for (k, c) in self.iter() {
            d_xi_term(i as usize - 1, *c, k, &mut out);
        }
        out
    }

    pub fn d_delta(&self, j: Index) -> Result<SymbolSum> {
        assert!((1..=3).contains(&j), "delta needs a concrete index");
        let mut out = SymbolSum::zero();
        for (k, c) in self.iter() {
            d_delta_term(j, *c, k, &mut out)?;
        }
        Ok(out)
    }

    /// Applies `d/dxi^l` for a multi-index `l`.
    pub fn d_xi_multi(&self, l: [u8; 3]) -> SymbolSum {
        let mut s = self.clone();
        for (i, &n) in l.iter().enumerate() {
            for _ in 0..n {
                s = s.d_xi(i as Index + 1);
            }
        }
        s
    }

    pub fn d_delta_multi(&self, l: [u8; 3]) -> Result<SymbolSum> {
        let mut s = self.clone();
        for (i, &n) in l.iter().enumerate() {
            for _ in 0..n {
                s = s.d_delta(i as Index + 1)?;
            }
        }
        Ok(s)
    }
}

/// Multi-indices in three variables with `|l| = n`.
pub fn multi_indices(n: u8) -> Vec<[u8; 3]> {
    let mut out = Vec::new();
    for a in (0..=n).rev() {
        for b in (0..=n - a).rev() {
            out.push([a, b, n - a - b]);
        }
    }
    out
}

fn inv_factorial(l: [u8; 3]) -> Coeff {
    let f = |n: u8| (1..=n as i64).product::<i64>();
    Coeff::frac(1, f(l[0]) * f(l[1]) * f(l[2]))
}

/// Memoizes derivatives of homogeneous parts during one composition.
#[derive(Default)]
struct DerivCache {
    xi: HashMap<(i32, [u8; 3]), SymbolSum>,
    delta: HashMap<(i32, [u8; 3]), SymbolSum>,
}

/// Symbol of a product, `sum_l 1/l! d_xi^l(p) delta^l(q)`, truncated to
/// orders `>= min_order`.
pub fn compose(p: &SymbolExpansion, q: &SymbolExpansion, min_order: i32) -> Result<SymbolExpansion> {
    let mut cache = DerivCache::default();
    let mut out = SymbolExpansion::default();
    for (&op, pp) in &p.parts {
        for (&oq, qp) in &q.parts {
            let top = op + oq;
            if top < min_order {
                continue;
            }
            for n in 0..=(top - min_order) as u8 {
                for l in multi_indices(n) {
                    let dp = cache.xi.entry((op, l)).or_insert_with(|| pp.d_xi_multi(l)).clone();
                    if dp.is_zero() {
                        continue;
                    }
                    let dq = match cache.delta.get(&(oq, l)) {
                        Some(d) => d.clone(),
                        None => {
                            let d = qp.d_delta_multi(l)?;
                            cache.delta.insert((oq, l), d.clone());
                            d
                        }
                    };
                    if dq.is_zero() {
                        continue;
                    }
                    let prod = dp.mul(&dq).scale(inv_factorial(l));
                    out.insert(top - n as i32, prod)?;
                }
            }
        }
    }
    Ok(out)
}

/// Order-0 symbol of left multiplication by an algebra element.
pub fn element(a: &NCPoly) -> SymbolExpansion {
    let mut s = SymbolSum::zero();
    for (w, c) in a.terms() {
        s.add(*c, TermKey::new([0; 3], 0, w.iter().cloned().map(Letter::F)));
    }
    let mut e = SymbolExpansion::default();
    e.parts.insert(0, s);
    e
}

/// Symbol `xi_j` of `delta_j`.
pub fn xi(j: Index) -> SymbolExpansion {
    let mut x = [0u8; 3];
    x[j as usize - 1] = 1;
    let mut e = SymbolExpansion::default();
    e.parts.insert(1, SymbolSum::single(Coeff::one(), TermKey::new(x, 0, [])));
    e
}

/// Symbol `|xi|^2` of the flat Laplacian `sum_i delta_i^2`.
pub fn laplacian() -> SymbolExpansion {
    let mut s = SymbolSum::zero();
    for i in 0..3 {
        let mut x = [0u8; 3];
        x[i] = 2;
        s.add(Coeff::one(), TermKey::new(x, 0, []));
    }
    let mut e = SymbolExpansion::default();
    e.parts.insert(2, s);
    e
}

/// Homogeneous parts `a2, a1, a0` of the symbol of
/// `P = k (sum_i delta_i^2) k^3 + sum_j k^3 delta_j(k^-2) delta_j k^3`.
pub fn symbol_p() -> Result<[SymbolSum; 3]> {
    let k = |m| element(&NCPoly::k_pow(m));
    let mut total = compose(&k(1), &compose(&laplacian(), &k(3), 0)?, 0)?;
    for j in 1..=3 {
        let coeff = &NCPoly::k_pow(3) * &NCPoly::k_pow(-2).apply_delta(j)?;
        let term = compose(&element(&coeff), &compose(&xi(j), &k(3), 0)?, 0)?;
        for (o, p) in term.parts {
            total.insert(o, p)?;
        }
    }
    Ok([total.part(2), total.part(1), total.part(0)])
}

/// Resolvent parametrix data: the symbol parts of `P` and `b0, b1, b2`.
#[derive(Clone, Debug)]
pub struct Resolvent {
    /// `a2, a1, a0`, indexed by order.
    pub a: [SymbolSum; 3],
    /// `b0, b1, b2`; `b_n` has order `-2 - n`.
    pub b: Vec<SymbolSum>,
}

impl Resolvent {
    /// Symbol of `P - lambda`, keyed by order.
    pub fn symbol_p_minus_lambda(&self) -> SymbolExpansion {
        let mut e = SymbolExpansion::default();
        let mut top = self.a[0].clone();
        top.add(-Coeff::one(), TermKey::new([0; 3], 1, []));
        e.parts.insert(2, top);
        e.parts.insert(1, self.a[1].clone());
        e.parts.insert(0, self.a[2].clone());
        e
    }

    pub fn parametrix(&self) -> SymbolExpansion {
        let mut e = SymbolExpansion::default();
        for (n, b) in self.b.iter().enumerate() {
            e.parts.insert(-2 - n as i32, b.clone());
        }
        e
    }

    /// Projection to a constant conformal factor.
    pub fn flat(&self) -> Resolvent {
        Resolvent { a: self.a.clone().map(|x| x.flat()), b: self.b.iter().map(SymbolSum::flat).collect() }
    }

    /// Number of merged terms in each `b_n`.
    pub fn counts(&self) -> Vec<usize> {
        self.b.iter().map(|b| b.len()).collect()
    }
}

/// `b0 = B` and, for `n >= 1`,
/// `b_n = - sum 1/l! d_xi^l(b_j) delta^l(a_m) b0` over `j < n`,
/// `|l| = n - 2 - j + m`.
pub fn resolvent_terms(order: usize) -> Result<Resolvent> {
    let a = symbol_p()?;
    let b0 = SymbolSum::single(Coeff::one(), TermKey::new([0; 3], 0, [Letter::B(1)]));
    let mut b = vec![b0.clone()];
    for n in 1..=order {
        let mut bn = SymbolSum::zero();
        for (j, bj) in b.iter().enumerate() {
            for m in 0..=2usize {
                let l_abs = n as i32 - 2 - j as i32 + m as i32;
                if l_abs < 0 {
                    continue;
                }
                // a is stored as [a2, a1, a0]
                let am = &a[2 - m];
                for l in multi_indices(l_abs as u8) {
                    let dp = bj.d_xi_multi(l);
                    if dp.is_zero() {
                        continue;
                    }
                    let dq = am.d_delta_multi(l)?;
                    if dq.is_zero() {
                        continue;
                    }
                    let prod = dp.mul(&dq).mul(&b0);
                    bn.extend_scaled(&prod, -inv_factorial(l));
                }
            }
        }
        bn.check_order(-2 - n as i32)?;
        b.push(bn);
    }
    Ok(Resolvent { a, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::Factor;

    fn key(xi: [u8; 3], word: Vec<Letter>) -> TermKey {
        TermKey::new(xi, 0, word)
    }

    #[test]
    fn principal_symbol() {
        let [a2, a1, _] = symbol_p().unwrap();
        let mut expected = SymbolSum::zero();
        for i in 0..3 {
            let mut x = [0; 3];
            x[i] = 2;
            expected.add(Coeff::one(), key(x, vec![Letter::k(4)]));
        }
        assert_eq!(a2, expected);

        let mut expected = SymbolSum::zero();
        for i in 1..=3u8 {
            let mut x = [0; 3];
            x[i as usize - 1] = 1;
            let dk = || Letter::F(Factor::dk(&[i]));
            expected.add(Coeff::one(), key(x, vec![Letter::k(1), dk(), Letter::k(2)]));
            expected.add(Coeff::one(), key(x, vec![Letter::k(2), dk(), Letter::k(1)]));
            expected.add(Coeff::int(2), key(x, vec![Letter::k(3), dk()]));
        }
        assert_eq!(a1, expected);
    }

    #[test]
    fn xi_derivative_of_b() {
        let b = SymbolSum::single(Coeff::one(), key([0; 3], vec![Letter::B(1)]));
        let d = b.d_xi(2);
        assert_eq!(d, SymbolSum::single(Coeff::int(-2), key([0, 1, 0], vec![Letter::k(4), Letter::B(2)])));
    }

    #[test]
    fn multi_index_count() {
        assert_eq!(multi_indices(2).len(), 6);
        assert_eq!(multi_indices(0), vec![[0, 0, 0]]);
    }
}
