use crate::ncalg::{Base, Factor, SUM};

use super::term::{Letter, SymbolSum, TermKey};

/// Pointwise commutative evaluation: `k = c`, its first and second
/// derivatives at a point, and a value of `lambda`.
///
/// Modular operators act trivially and `B = (c^4 |xi|^2 - lambda)^-1`.
#[derive(Clone, Copy, Debug)]
pub struct ScalarModel {
    pub c: f64,
    pub grad: [f64; 3],
    pub hess: [[f64; 3]; 3],
    pub lambda: f64,
}

impl ScalarModel {
    /// Value of `delta_J(k)` for a sorted concrete index list.
    pub fn dk(&self, derivs: &[u8]) -> f64 {
        match derivs {
            [i] => self.grad[*i as usize - 1],
            [i, j] => self.hess[*i as usize - 1][*j as usize - 1],
            _ => panic!("scalar model carries derivatives up to order 2"),
        }
    }

    /// Value of a factor with concrete indices.
    pub fn factor(&self, f: &Factor) -> f64 {
        match f {
            Factor::KPow(m) => self.c.powi(*m),
            Factor::Mod { word, .. } => {
                assert!(word.base == Base::K, "expand k^-1 words before evaluation");
                assert!(!word.derivs().contains(&SUM), "expand summed indices before evaluation");
                self.dk(word.derivs())
            }
        }
    }

    pub fn term(&self, key: &TermKey, xi: [f64; 3]) -> f64 {
        let r2: f64 = xi.iter().map(|x| x * x).sum();
        let b = 1.0 / (self.c.powi(4) * r2 - self.lambda);
        let mut v = self.lambda.powi(key.lam as i32);
        for (x, e) in xi.iter().zip(key.xi) {
            v *= x.powi(e as i32);
        }
        for l in &key.word {
            v *= match l {
                Letter::B(m) => b.powi(*m as i32),
                Letter::F(f) => self.factor(f),
            };
        }
        v
    }

    pub fn eval(&self, sum: &SymbolSum, xi: [f64; 3]) -> f64 {
        sum.iter().map(|(k, c)| c.to_f64() * self.term(k, xi)).sum()
    }
}
