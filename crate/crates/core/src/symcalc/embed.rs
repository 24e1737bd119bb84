//! Exact zero test for sums of resolvent terms with symbolic `lambda`.
//!
//! Between two algebra factors, `k` and `B` commute, so each run
//! `k^a B^b` is a function of one commuting variable `k_j`, with
//! `B = (k_j^4 R - lambda)^-1` and `R = |xi|^2`. Terms are grouped by the
//! sequence of algebra factors; within a group, clearing the denominators
//! `(k_j^4 R - lambda)^M_j` gives a Laurent polynomial in
//! `xi1, xi2, xi3, R, lambda, k_0, k_1, ...` that vanishes iff the group does.

use std::collections::{BTreeMap, HashMap};

use num_rational::Rational64;
use num_traits::Zero;

use crate::ncalg::{Coeff, Factor};

use super::term::{Letter, ResTerm, SymbolSum, TermKey};

type Exps = Vec<i32>;

struct Poly {
    terms: HashMap<Exps, Rational64>,
}

impl Poly {
    fn new() -> Self {
        Poly { terms: HashMap::new() }
    }

    fn add(&mut self, e: Exps, c: Rational64) {
        let v = self.terms.entry(e).or_insert_with(Rational64::zero);
        *v += c;
    }

    fn nonzero(&self) -> usize {
        self.terms.values().filter(|c| !c.is_zero()).count()
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Runs `(a_j, b_j)` and the factor skeleton of a canonical word.
fn split_runs(word: &[Letter]) -> (Vec<(i32, u32)>, Vec<Factor>) {
    let mut runs = vec![(0, 0)];
    let mut skel = Vec::new();
    for l in word {
        match l {
            Letter::B(m) => runs.last_mut().unwrap().1 += m,
            Letter::F(Factor::KPow(a)) => runs.last_mut().unwrap().0 += a,
            Letter::F(f) => {
                skel.push(f.clone());
                runs.push((0, 0));
            }
        }
    }
    (runs, skel)
}

// variable slots
const X1: usize = 0;
const X2: usize = 1;
const X3: usize = 2;
const R: usize = 3;
const LAM: usize = 4;
const K0: usize = 5;

/// Expands `xi^xi * lambda^lam` with `xi3^2 = R - xi1^2 - xi2^2`, times `c`,
/// into `base` (which already carries the k exponents).
fn push_xi(poly: &mut Poly, base: &Exps, xi: [u8; 3], lam: u8, c: Rational64) {
    let half = (xi[2] / 2) as u32;
    // (R - x1^2 - x2^2)^half
    for p in 0..=half {
        for q in 0..=half - p {
            let r = half - p - q;
            let multinom = binomial(half, p) * binomial(half - p, q);
            let sign = if (q + r) % 2 == 0 { 1 } else { -1 };
            let mut e = base.clone();
            e[R] += p as i32;
            e[X1] += xi[0] as i32 + 2 * q as i32;
            e[X2] += xi[1] as i32 + 2 * r as i32;
            e[X3] += (xi[2] % 2) as i32;
            e[LAM] += lam as i32;
            poly.add(e, c * Rational64::from_integer(sign * multinom));
        }
    }
}

/// Number of nonzero coefficients after clearing denominators; zero iff the
/// sum vanishes identically. Coefficients must be rational.
pub fn residual_size(sum: &SymbolSum) -> usize {
    let mut groups: BTreeMap<Vec<Factor>, Vec<(Vec<(i32, u32)>, &TermKey, Coeff)>> = BTreeMap::new();
    for (k, c) in sum.iter() {
        let (runs, skel) = split_runs(&k.word);
        groups.entry(skel).or_default().push((runs, k, *c));
    }
    let mut total = 0;
    for (skel, terms) in groups {
        let nruns = skel.len() + 1;
        let mut max_b = vec![0u32; nruns];
        for (runs, _, _) in &terms {
            for (j, (_, b)) in runs.iter().enumerate() {
                max_b[j] = max_b[j].max(*b);
            }
        }
        let mut poly = Poly::new();
        for (runs, key, c) in &terms {
            assert!(c.is_rational(), "zero test expects rational coefficients");
            // product over runs of k_j^a (k_j^4 R - lambda)^(M_j - b_j)
            let mut partial: Vec<(Exps, Rational64)> = vec![(vec![0; K0 + nruns], c.q())];
            for (j, (a, b)) in runs.iter().enumerate() {
                let e = max_b[j] - b;
                let mut next = Vec::new();
                for (ex, cf) in &partial {
                    for t in 0..=e {
                        let mut ex = ex.clone();
                        ex[K0 + j] += a + 4 * t as i32;
                        ex[R] += t as i32;
                        ex[LAM] += (e - t) as i32;
                        let sign = if (e - t) % 2 == 0 { 1 } else { -1 };
                        next.push((ex, *cf * Rational64::from_integer(sign * binomial(e, t))));
                    }
                }
                partial = next;
            }
            for (ex, cf) in partial {
                push_xi(&mut poly, &ex, key.xi, key.lam, cf);
            }
        }
        total += poly.nonzero();
    }
    total
}

/// Residual terms of `sum` kept for diagnostics, when nonzero.
pub fn sample_terms(sum: &SymbolSum, n: usize) -> Vec<String> {
    sum.terms().take(n).map(|t: ResTerm| t.to_string()).collect()
}
