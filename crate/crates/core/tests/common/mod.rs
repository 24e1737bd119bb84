//! Independent scalar-model oracle: `k` is a quadratic function near the
//! origin, all algebra is commutative, and symbols are truncated Taylor
//! polynomials in `(x1, x2, x3, xi1, xi2, xi3)` around `(0, xi0)`.

#![allow(dead_code)]

use std::collections::BTreeMap;

use nctorus::ncalg::{Base, Factor, SUM};
use nctorus::symcalc::ScalarModel;

pub const DEG: u8 = 3;

type Exp = [u8; 6];

#[derive(Clone, Debug, Default)]
pub struct Taylor(BTreeMap<Exp, f64>);

fn deg(e: &Exp) -> u8 {
    e.iter().sum()
}

impl Taylor {
    pub fn constant(c: f64) -> Self {
        let mut t = Taylor::default();
        t.0.insert([0; 6], c);
        t
    }

    /// `offset + v_i`.
    pub fn var(i: usize, offset: f64) -> Self {
        let mut t = Taylor::constant(offset);
        let mut e = [0; 6];
        e[i] = 1;
        t.0.insert(e, 1.0);
        t
    }

    pub fn value(&self) -> f64 {
        self.0.get(&[0; 6]).copied().unwrap_or(0.0)
    }

    pub fn add(&self, o: &Taylor) -> Taylor {
        let mut t = self.clone();
        for (e, c) in &o.0 {
            *t.0.entry(*e).or_default() += c;
        }
        t
    }

    pub fn scale(&self, s: f64) -> Taylor {
        Taylor(self.0.iter().map(|(e, c)| (*e, c * s)).collect())
    }

    pub fn sub(&self, o: &Taylor) -> Taylor {
        self.add(&o.scale(-1.0))
    }

    pub fn mul(&self, o: &Taylor) -> Taylor {
        let mut t = Taylor::default();
        for (ea, ca) in &self.0 {
            for (eb, cb) in &o.0 {
                let e: Exp = std::array::from_fn(|i| ea[i] + eb[i]);
                if deg(&e) <= DEG {
                    *t.0.entry(e).or_default() += ca * cb;
                }
            }
        }
        t
    }

    pub fn recip(&self) -> Taylor {
        let f0 = self.value();
        let rest = self.sub(&Taylor::constant(f0)).scale(-1.0 / f0);
        let mut sum = Taylor::constant(1.0);
        let mut pow = Taylor::constant(1.0);
        for _ in 0..DEG {
            pow = pow.mul(&rest);
            sum = sum.add(&pow);
        }
        sum.scale(1.0 / f0)
    }

    pub fn powi(&self, m: i32) -> Taylor {
        let base = if m < 0 { self.recip() } else { self.clone() };
        let mut t = Taylor::constant(1.0);
        for _ in 0..m.unsigned_abs() {
            t = t.mul(&base);
        }
        t
    }

    pub fn deriv(&self, i: usize) -> Taylor {
        let mut t = Taylor::default();
        for (e, c) in &self.0 {
            if e[i] > 0 {
                let mut f = *e;
                f[i] -= 1;
                t.0.insert(f, c * e[i] as f64);
            }
        }
        t
    }

    pub fn deriv_multi(&self, vars: &[usize]) -> Taylor {
        vars.iter().fold(self.clone(), |t, &i| t.deriv(i))
    }
}

/// Second-order jet of `k` at the origin plus a point `xi0` and `lambda`.
#[derive(Clone, Copy, Debug)]
pub struct Jet {
    pub c: f64,
    pub grad: [f64; 3],
    pub hess: [[f64; 3]; 3],
    pub xi0: [f64; 3],
    pub lambda: f64,
}

impl Jet {
    pub fn model(&self) -> ScalarModel {
        ScalarModel { c: self.c, grad: self.grad, hess: self.hess, lambda: self.lambda }
    }

    fn k(&self) -> Taylor {
        let x: Vec<Taylor> = (0..3).map(|i| Taylor::var(i, 0.0)).collect();
        let mut k = Taylor::constant(self.c);
        for i in 0..3 {
            k = k.add(&x[i].scale(self.grad[i]));
            for j in 0..3 {
                k = k.add(&x[i].mul(&x[j]).scale(0.5 * self.hess[i][j]));
            }
        }
        k
    }

    fn xi(&self, j: usize) -> Taylor {
        Taylor::var(3 + j, self.xi0[j])
    }

    /// Symbol of `k Lap k^3 + sum_j k^3 d_j(k^-2) d_j k^3` from Leibniz expansion,
    /// split by order as `[a2, a1, a0]`.
    pub fn symbol(&self) -> [Taylor; 3] {
        let k = self.k();
        let k3 = k.powi(3);
        let km2 = k.powi(-2);
        let mut a2 = Taylor::default();
        let mut a1 = Taylor::default();
        let mut a0 = Taylor::default();
        for j in 0..3 {
            let xi = self.xi(j);
            a2 = a2.add(&k.powi(4).mul(&xi).mul(&xi));
            let c1 = k.mul(&k3.deriv(j)).scale(2.0).add(&k.powi(6).mul(&km2.deriv(j)));
            a1 = a1.add(&c1.mul(&xi));
            a0 = a0.add(&k.mul(&k3.deriv_multi(&[j, j])));
            a0 = a0.add(&k3.mul(&km2.deriv(j)).mul(&k3.deriv(j)));
        }
        [a2, a1, a0]
    }

    /// `b0, b1, b2` from the recursion, evaluated with every `l` and `j` spelled out.
    pub fn resolvent(&self) -> [Taylor; 3] {
        let [a2, a1, a0] = self.symbol();
        let b0 = a2.sub(&Taylor::constant(self.lambda)).recip();
        let dxi = |t: &Taylor, j: usize| t.deriv(3 + j);
        let mut b1 = b0.mul(&a1).mul(&b0);
        for j in 0..3 {
            b1 = b1.add(&dxi(&b0, j).mul(&a2.deriv(j)).mul(&b0));
        }
        let b1 = b1.scale(-1.0);
        let mut b2 = b0.mul(&a0).mul(&b0).add(&b1.mul(&a1).mul(&b0));
        for i in 0..3 {
            b2 = b2.add(&dxi(&b0, i).mul(&a1.deriv(i)).mul(&b0));
            b2 = b2.add(&dxi(&b1, i).mul(&a2.deriv(i)).mul(&b0));
            for j in 0..3 {
                // each unordered pair {i, j} appears twice; 1/l! gives 1/2 on the diagonal
                let w = 0.5;
                b2 = b2.add(&dxi(&dxi(&b0, i), j).mul(&a2.deriv_multi(&[i, j])).mul(&b0).scale(w));
            }
        }
        [b0, b1, b2.scale(-1.0)]
    }
}

/// Value of a product of derivative factors, summing the shared index `i`.
pub fn operand_value(model: &ScalarModel, factors: &[Factor]) -> f64 {
    let has_sum = factors.iter().any(|f| f.indices().contains(&SUM));
    let dirs: &[u8] = if has_sum { &[1, 2, 3] } else { &[0] };
    dirs.iter()
        .map(|&i| {
            factors
                .iter()
                .map(|f| match f {
                    Factor::KPow(m) => model.c.powi(*m),
                    Factor::Mod { word, .. } => {
                        let d: Vec<u8> = word.derivs().iter().map(|&j| if j == SUM { i } else { j }).collect();
                        match word.base {
                            Base::K => model.dk(&d),
                            Base::KInv => kinv_derivative(model, &d),
                        }
                    }
                })
                .product::<f64>()
        })
        .sum()
}

fn kinv_derivative(m: &ScalarModel, d: &[u8]) -> f64 {
    let c = m.c;
    match d {
        [a] => -m.dk(&[*a]) / (c * c),
        [a, b] => 2.0 * m.dk(&[*a]) * m.dk(&[*b]) / c.powi(3) - m.dk(&[*a.min(b), *a.max(b)]) / (c * c),
        _ => panic!("order > 2"),
    }
}

/// Random jet with `c` in `[1/2, 2]`, small derivatives and a generic `xi0`.
pub fn random_jet(rng: &mut impl rand::Rng, lambda: f64) -> Jet {
    let mut hess = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let v = rng.gen_range(-1.0..1.0);
            hess[i][j] = v;
            hess[j][i] = v;
        }
    }
    Jet {
        c: rng.gen_range(0.5..2.0),
        grad: std::array::from_fn(|_| rng.gen_range(-1.0..1.0)),
        hess,
        xi0: std::array::from_fn(|_| rng.gen_range(-1.5..1.5)),
        lambda,
    }
}

pub fn seed() -> u64 {
    std::env::var("NCT3_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20_261_015)
}

/// Product rule on S^2 (5-point Gauss-Legendre in `cos theta`, 10 equally
/// spaced azimuths), exact for polynomials of degree <= 9. Weights sum to `4 pi`.
pub fn sphere_rule() -> Vec<([f64; 3], f64)> {
    let gl: [(f64, f64); 5] = [
        (0.0, 0.568_888_888_888_888_9),
        (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.906_179_845_938_664, 0.236_926_885_056_189_1),
        (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    ];
    let n_phi = 10;
    let mut out = Vec::new();
    for (z, w) in gl {
        let s = (1.0 - z * z).sqrt();
        for a in 0..n_phi {
            let phi = 2.0 * std::f64::consts::PI * a as f64 / n_phi as f64;
            out.push(([s * phi.cos(), s * phi.sin(), z], w * 2.0 * std::f64::consts::PI / n_phi as f64));
        }
    }
    out
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

use nctorus::integrate::{apply_rearrangement, BrSum, RadialTerm};
use nctorus::symcalc::Resolvent;

/// Max relative deviation between the engine's `b0, b1, b2` and the Taylor
/// oracle at `n` random jets.
pub fn resolvent_oracle_error(res: &Resolvent, n: usize, rng: &mut impl rand::Rng) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..n {
        let lambda = -rng.gen_range(0.2..3.0);
        let jet = random_jet(rng, lambda);
        let oracle = jet.resolvent();
        let model = jet.model();
        for (b, o) in res.b.iter().zip(&oracle) {
            worst = worst.max(rel_err(model.eval(b, jet.xi0), o.value()));
        }
    }
    worst
}

/// `B(r)` in the scalar model at `lambda = -1`.
pub fn br_value(br: &BrSum, model: &ScalarModel, r: f64) -> f64 {
    let b = 1.0 / (model.c.powi(4) * r * r + 1.0);
    br.iter().map(|t| term_value(&t, model, r, b)).sum()
}

fn term_value(t: &RadialTerm, model: &ScalarModel, r: f64, b: f64) -> f64 {
    let factors: Vec<Factor> = t.key.operands.iter().flatten().cloned().collect();
    t.coeff.to_f64()
        * r.powi(2 * t.key.p as i32)
        * model.c.powi(t.key.k_prefix)
        * b.powi(t.key.b_total() as i32)
        * operand_value(model, &factors)
}

/// Max relative deviation between `B(r)` and `3/(4 pi) r^2 int_{S^2} b2(r w, -1) dw`.
pub fn sphere_oracle_error(res: &Resolvent, br: &BrSum, n: usize, rng: &mut impl rand::Rng) -> f64 {
    let rule = sphere_rule();
    let mut worst = 0.0f64;
    for _ in 0..n {
        let model = random_jet(rng, -1.0).model();
        let r: f64 = rng.gen_range(0.2..3.0);
        let avg: f64 = rule
            .iter()
            .map(|(w, wt)| wt * model.eval(&res.b[2], [r * w[0], r * w[1], r * w[2]]))
            .sum();
        let want = 3.0 / (4.0 * std::f64::consts::PI) * r * r * avg;
        worst = worst.max(rel_err(br_value(br, &model, r), want));
    }
    worst
}

/// Max relative deviation between the rearranged value of a `B(r)` term
/// (operands set to 1, `Delta = id`) and direct radial quadrature.
pub fn radial_oracle_error(br: &BrSum, c_values: &[f64], n: usize, rng: &mut impl rand::Rng) -> f64 {
    use nctorus::hfun::{limit_f64, HIndex};
    let terms: Vec<RadialTerm> = br.iter().collect();
    let mut worst = 0.0f64;
    for _ in 0..n {
        let t = &terms[rng.gen_range(0..terms.len())];
        let re = apply_rearrangement(t).unwrap();
        let h = limit_f64(&HIndex::new(&re.index).unwrap());
        for &c in c_values {
            let sym = re.coeff.to_f64() * c.powi(re.kpow) * h;
            let p = t.key.p as i32;
            let m = t.key.b_total() as i32;
            let f = |s: f64| {
                if s >= 1.0 {
                    return 0.0;
                }
                let r = s / (1.0 - s);
                r.powi(2 * p) * c.powi(t.key.k_prefix) * (c.powi(4) * r * r + 1.0).powi(-m) / ((1.0 - s) * (1.0 - s))
            };
            let direct = t.coeff.to_f64() * quadrature::double_exponential::integrate(f, 0.0, 1.0, 1e-13).integral;
            worst = worst.max(rel_err(sym, direct));
        }
    }
    worst
}
