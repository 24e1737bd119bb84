use std::collections::{BTreeMap, HashMap, VecDeque};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use faer::{c64, Mat};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::hspec::{HSpec, Mode};

/// Upper triangle `(theta_12, theta_13, theta_23)` of the skew-symmetric matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Theta(pub [f64; 3]);

impl Theta {
    pub fn get(&self, k: usize, l: usize) -> f64 {
        let t = &self.0;
        match (k, l) {
            (0, 1) => t[0],
            (0, 2) => t[1],
            (1, 2) => t[2],
            (a, b) if a == b => 0.0,
            (a, b) => -self.get(b, a),
        }
    }

    /// `beta(s, r) = s1 t12 r2 + s1 t13 r3 + s2 t23 r3`.
    pub fn beta(&self, s: Mode, r: Mode) -> f64 {
        let t = &self.0;
        let (s, r) = (s.map(f64::from), r.map(f64::from));
        s[0] * t[0] * r[1] + s[0] * t[1] * r[2] + s[1] * t[2] * r[2]
    }

    /// Cocycle of `u^s u^r = phase(s, r) u^(s+r)`.
    pub fn phase(&self, s: Mode, r: Mode) -> c64 {
        c64::cis(PI * (self.beta(s, r) - self.beta(r, s)))
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.0[0], self.0[1], self.0[2])
    }
}

impl FromStr for Theta {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("theta entry {x:?}"))))
            .collect::<Result<_>>()?;
        let t: [f64; 3] = v.try_into().map_err(|_| Error::Parse("theta needs t12,t13,t23".into()))?;
        if t.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parse("theta entries must be finite".into()));
        }
        Ok(Theta(t))
    }
}

/// Left-regular representation on the modes `|r|_inf <= n`, with
/// Dirichlet truncation: products leaving the window are dropped.
#[derive(Clone, Debug)]
pub struct TorusRep {
    pub theta: Theta,
    pub n: usize,
    pub h: HSpec,
    coeffs: BTreeMap<Mode, c64>,
}

impl TorusRep {
    pub fn new(theta: Theta, n: usize, h: HSpec) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("truncation radius must be positive".into()));
        }
        if h.degree() as usize > n {
            return Err(Error::Truncation(n));
        }
        Ok(TorusRep { theta, n, coeffs: h.coefficients(), h })
    }

    pub fn dim(&self) -> usize {
        (2 * self.n + 1).pow(3)
    }

    pub fn contains(&self, r: Mode) -> bool {
        r.iter().all(|x| x.unsigned_abs() as usize <= self.n)
    }

    pub fn coefficients(&self) -> &BTreeMap<Mode, c64> {
        &self.coeffs
    }

    pub fn modes(&self) -> Vec<Mode> {
        let n = self.n as i32;
        let mut out = Vec::with_capacity(self.dim());
        for a in -n..=n {
            for b in -n..=n {
                for c in -n..=n {
                    out.push([a, b, c]);
                }
            }
        }
        out
    }

    /// Every mode in one block.
    pub fn full_block(&self) -> Block {
        Block::new(self, self.modes())
    }

    /// Connected components of the window under shifts by the support of h;
    /// `h`, `k^m`, the gradings and `P` are block diagonal.
    pub fn blocks(&self) -> Vec<Block> {
        let shifts: Vec<Mode> = self.coeffs.keys().copied().collect();
        let mut seen: HashMap<Mode, ()> = HashMap::new();
        let mut out = Vec::new();
        for start in self.modes() {
            if seen.contains_key(&start) {
                continue;
            }
            seen.insert(start, ());
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(r) = queue.pop_front() {
                for s in &shifts {
                    let t = [r[0] + s[0], r[1] + s[1], r[2] + s[2]];
                    if self.contains(t) && !seen.contains_key(&t) {
                        seen.insert(t, ());
                        comp.push(t);
                        queue.push_back(t);
                    }
                }
            }
            comp.sort_unstable();
            out.push(Block::new(self, comp));
        }
        out
    }

    /// The block holding the unit vector `e_0`.
    pub fn unit_block(&self) -> Block {
        self.blocks().into_iter().find(|b| b.position([0, 0, 0]).is_some()).expect("origin is in the window")
    }
}

/// A set of modes closed under the action of h, with its matrices.
#[derive(Clone, Debug)]
pub struct Block {
    pub modes: Vec<Mode>,
    index: HashMap<Mode, usize>,
    theta: Theta,
    coeffs: BTreeMap<Mode, c64>,
}

impl Block {
    fn new(rep: &TorusRep, modes: Vec<Mode>) -> Self {
        let index = modes.iter().enumerate().map(|(i, r)| (*r, i)).collect();
        Block { modes, index, theta: rep.theta, coeffs: rep.coeffs.clone() }
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn position(&self, r: Mode) -> Option<usize> {
        self.index.get(&r).copied()
    }

    /// Left multiplication by `u^s`, restricted to the block.
    pub fn shift(&self, s: Mode) -> Mat<c64> {
        let mut m = Mat::<c64>::zeros(self.len(), self.len());
        for (j, &r) in self.modes.iter().enumerate() {
            if let Some(i) = self.position([s[0] + r[0], s[1] + r[1], s[2] + r[2]]) {
                m[(i, j)] = self.theta.phase(s, r);
            }
        }
        m
    }

    /// Diagonal grading `e_r -> r_j e_r`, `j` in `0..3`.
    pub fn grading(&self, j: usize) -> Mat<c64> {
        Mat::<c64>::from_fn(self.len(), self.len(), |a, b| {
            if a == b {
                c64::new(f64::from(self.modes[a][j]), 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        })
    }

    /// `h = sum_s c_s u^s` on the block.
    pub fn h_matrix(&self) -> Mat<c64> {
        let mut m = Mat::<c64>::zeros(self.len(), self.len());
        for (s, c) in &self.coeffs {
            for (j, &r) in self.modes.iter().enumerate() {
                if let Some(i) = self.position([s[0] + r[0], s[1] + r[1], s[2] + r[2]]) {
                    m[(i, j)] += c * self.theta.phase(*s, r);
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use faer::Scale;

    use super::*;

    fn max_abs(m: &Mat<c64>) -> f64 {
        let mut x: f64 = 0.0;
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                x = x.max(m[(i, j)].norm());
            }
        }
        x
    }

    fn interior_cols(b: &Block, depth: i32, n: i32) -> Vec<usize> {
        (0..b.len()).filter(|&j| b.modes[j].iter().all(|x| x.abs() <= n - depth)).collect()
    }

    #[test]
    fn commutative_shift() {
        let rep = TorusRep::new(Theta::default(), 2, HSpec::flat()).unwrap();
        let b = rep.full_block();
        let u1 = b.shift([1, 0, 0]);
        let (i, j) = (b.position([1, 0, 0]).unwrap(), b.position([0, 0, 0]).unwrap());
        assert_eq!(u1[(i, j)], c64::new(1.0, 0.0));
    }

    #[test]
    fn torus_relation_and_cocycle() {
        let theta = Theta([0.3817, 0.25, -0.11]);
        let rep = TorusRep::new(theta, 3, HSpec::flat()).unwrap();
        let b = rep.full_block();
        let e = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        for k in 0..3 {
            for l in 0..3 {
                let lhs = &b.shift(e[k]) * &b.shift(e[l]);
                let rhs = &b.shift(e[l]) * &b.shift(e[k]) * Scale(c64::cis(2.0 * PI * theta.get(k, l)));
                for j in interior_cols(&b, 2, 3) {
                    for i in 0..b.len() {
                        assert!((lhs[(i, j)] - rhs[(i, j)]).norm() < 1e-12);
                    }
                }
            }
        }
        let (s, r) = ([1, -1, 1], [0, 1, -1]);
        let lhs = &b.shift(s) * &b.shift(r);
        let rhs = b.shift([1, 0, 0]) * Scale(theta.phase(s, r));
        for j in interior_cols(&b, 2, 3) {
            for i in 0..b.len() {
                assert!((lhs[(i, j)] - rhs[(i, j)]).norm() < 1e-12);
            }
        }
        // (u^s)* = u^-s away from the boundary
        let adj = b.shift(s).adjoint().to_owned() - b.shift([-1, 1, -1]);
        let cols = interior_cols(&b, 1, 3);
        assert!(cols.iter().all(|&j| (0..b.len()).all(|i| adj[(i, j)].norm() < 1e-12)));
    }

    #[test]
    fn grading_is_diagonal_mode() {
        let rep = TorusRep::new(Theta::default(), 1, HSpec::flat()).unwrap();
        let b = rep.full_block();
        let d = b.grading(1);
        let i = b.position([0, -1, 1]).unwrap();
        assert_eq!(d[(i, i)].re, -1.0);
    }

    #[test]
    fn h_is_hermitian_and_blocks_partition() {
        let h: HSpec = "0.1:cos(1,0,0);0.05:sin(0,1,0)".parse().unwrap();
        let rep = TorusRep::new(Theta([0.25, 0.0, 0.0]), 3, h).unwrap();
        let blocks = rep.blocks();
        assert_eq!(blocks.len(), 7);
        assert_eq!(blocks.iter().map(Block::len).sum::<usize>(), rep.dim());
        let b = rep.unit_block();
        let m = b.h_matrix();
        assert!(max_abs(&(m.adjoint().to_owned() - &m)) < 1e-15);
        assert!(max_abs(&m) > 0.0);
    }

    #[test]
    fn truncation_error() {
        let h: HSpec = "0.1:cos(3,0,0)".parse().unwrap();
        assert!(matches!(TorusRep::new(Theta::default(), 2, h), Err(Error::Truncation(2))));
    }
}
