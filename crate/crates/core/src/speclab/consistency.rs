use std::collections::BTreeMap;
use std::f64::consts::PI;

use faer::{c64, Mat};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hfun::{h_closed, HIndex};
use crate::integrate::{CurvatureFunctional, HTerm};
use crate::ncalg::{Base, Factor, Index, SUM};

use super::heat::{curvature_fit, heat_fit, HeatFit, TGrid};
use super::hspec::HSpec;
use super::rep::{Theta, TorusRep};
use super::spectral::{p_spectrum, KCalc};

/// Row-major dense matrix in the eigenbasis of `k`.
#[derive(Clone)]
struct Dense {
    n: usize,
    a: Vec<c64>,
}

impl Dense {
    fn from_mat(m: &Mat<c64>) -> Self {
        let n = m.nrows();
        Dense { n, a: (0..n * n).map(|i| m[(i / n, i % n)]).collect() }
    }

    fn diag(d: &[f64]) -> Self {
        let n = d.len();
        let mut a = vec![c64::new(0.0, 0.0); n * n];
        for i in 0..n {
            a[i * n + i] = c64::new(d[i], 0.0);
        }
        Dense { n, a }
    }

    fn to_mat(&self) -> Mat<c64> {
        Mat::from_fn(self.n, self.n, |i, j| self.a[i * self.n + j])
    }

    fn row(&self, i: usize) -> &[c64] {
        &self.a[i * self.n..(i + 1) * self.n]
    }
}

/// The unit block in the eigenbasis of `k`: `kappa`, the gradings, and
/// the `e_0` row of the eigenvectors.
struct Frame {
    kappa: Vec<f64>,
    grading: [Mat<c64>; 3],
    v0: Vec<c64>,
}

impl Frame {
    fn new(rep: &TorusRep) -> Result<Self> {
        let block = rep.unit_block();
        let kc = KCalc::new(&block)?;
        let kappa = kc.kappa();
        let (lo, hi) = kappa.iter().fold((f64::INFINITY, 0.0_f64), |(l, h), &k| (l.min(k), h.max(k)));
        // modular multipliers are kappa ratios to the sixth power
        if !(lo > 0.0 && (hi / lo).powi(6) < 1e12) {
            return Err(Error::Spectral(format!("modular multipliers span {:e}", (hi / lo).powi(6))));
        }
        let e0 = block.position([0, 0, 0]).expect("unit block holds e_0");
        let grading = [0, 1, 2].map(|j| kc.v.adjoint() * block.grading(j) * &kc.v);
        let v0 = (0..kc.len()).map(|a| kc.v[(e0, a)]).collect();
        Ok(Frame { kappa, grading, v0 })
    }

    fn len(&self) -> usize {
        self.kappa.len()
    }

    fn q(&self, a: usize) -> f64 {
        self.kappa[a].powi(6)
    }

    /// `tau(k^-6)`.
    fn volume(&self) -> f64 {
        self.v0.iter().zip(&self.kappa).map(|(v, k)| v.norm_sqr() * k.powi(-6)).sum()
    }

    fn factor(&self, f: &Factor, sum_to: Index) -> Mat<c64> {
        match f {
            Factor::KPow(m) => Dense::diag(&self.kappa.iter().map(|k| k.powi(*m)).collect::<Vec<_>>()).to_mat(),
            Factor::Mod { sixths, word } => {
                let base: Vec<f64> = match word.base {
                    Base::K => self.kappa.clone(),
                    Base::KInv => self.kappa.iter().map(|k| 1.0 / k).collect(),
                };
                let mut x = Dense::diag(&base).to_mat();
                for &j in word.derivs() {
                    let j = if j == SUM { sum_to } else { j };
                    let d = &self.grading[j as usize - 1];
                    x = d * &x - &x * d;
                }
                let s = *sixths;
                if s != 0 {
                    let n = self.len();
                    x = Mat::from_fn(n, n, |a, b| x[(a, b)] * (self.kappa[b] / self.kappa[a]).powi(s));
                }
                x
            }
        }
    }

    fn operand(&self, rho: &[Factor], sum_to: Index) -> Dense {
        let n = self.len();
        let mut m = Dense::diag(&vec![1.0; n]).to_mat();
        for f in rho {
            m = &m * self.factor(f, sum_to);
        }
        Dense::from_mat(&m)
    }
}

/// Index choices a line is summed over.
fn index_values(line: &HTerm) -> Vec<Index> {
    if line.sum_index() {
        vec![1, 2, 3]
    } else {
        vec![SUM]
    }
}

struct PreparedLine {
    kpow: i32,
    combo: Vec<(usize, f64)>,
    operands: Vec<Vec<Dense>>,
}

/// `tau(k^-6 S)` for the functional instantiated on the unit block, with
/// `Delta^(s/6)(x) = k^-s x k^s` and the H-combinations applied through the
/// eigenvalues of `k`.
#[derive(Clone, Debug, Serialize)]
pub struct TauValue {
    pub value: f64,
    /// Imaginary part, zero up to rounding.
    pub imag: f64,
    /// `tau(k^-6)`.
    pub volume: f64,
}

pub fn tau_curvature(rep: &TorusRep, functional: &CurvatureFunctional) -> Result<TauValue> {
    let frame = Frame::new(rep)?;
    let n = frame.len();
    let mut indices: [Vec<HIndex>; 2] = [Vec::new(), Vec::new()];
    let mut prepared: [Vec<PreparedLine>; 2] = [Vec::new(), Vec::new()];
    for line in &functional.lines {
        let arity = line.arity();
        if !(1..=2).contains(&arity) {
            return Err(Error::Config(format!("line of arity {arity} cannot be instantiated")));
        }
        let slot = &mut indices[arity - 1];
        let mut combo = Vec::new();
        for (h, c) in &line.combo {
            let idx = HIndex::new(h)?;
            if idx.m().len() != arity + 1 {
                return Err(Error::Config(format!("index {idx} on a line of arity {arity}")));
            }
            let pos = match slot.iter().position(|x| *x == idx) {
                Some(p) => p,
                None => {
                    slot.push(idx);
                    slot.len() - 1
                }
            };
            combo.push((pos, c.to_f64()));
        }
        let operands = index_values(line)
            .into_iter()
            .map(|i| line.operands.iter().map(|rho| frame.operand(rho, i)).collect())
            .collect();
        prepared[arity - 1].push(PreparedLine { kpow: line.kpow, combo, operands });
    }

    let w: Vec<c64> = frame.v0.iter().map(|v| v.conj()).collect();
    let h1 = |idx: &HIndex, x: f64| h_closed(idx, &[x]).map(|v| v.value);
    let h2 = |idx: &HIndex, x: f64, y: f64| h_closed(idx, &[x, y]).map(|v| v.value);

    let rows: Vec<c64> = (0..n)
        .into_par_iter()
        .map(|a| -> Result<c64> {
            let qa = frame.q(a);
            let mut tab1 = vec![vec![0.0; n]; indices[0].len()];
            for (t, idx) in tab1.iter_mut().zip(&indices[0]) {
                for c in 0..n {
                    t[c] = h1(idx, frame.q(c) / qa)?;
                }
            }
            let mut tab2 = vec![vec![0.0; n * n]; indices[1].len()];
            for (t, idx) in tab2.iter_mut().zip(&indices[1]) {
                for b in 0..n {
                    for c in 0..n {
                        t[b * n + c] = h2(idx, frame.q(b) / qa, frame.q(c) / qa)?;
                    }
                }
            }
            let mut acc = c64::new(0.0, 0.0);
            for line in &prepared[0] {
                let g: Vec<f64> = (0..n).map(|c| line.combo.iter().map(|&(p, x)| x * tab1[p][c]).sum()).collect();
                let mut s = c64::new(0.0, 0.0);
                for ops in &line.operands {
                    let row = ops[0].row(a);
                    for c in 0..n {
                        s += row[c] * w[c] * g[c];
                    }
                }
                acc += s * frame.kappa[a].powi(line.kpow - 6);
            }
            let mut g = vec![0.0; n * n];
            for line in &prepared[1] {
                for (bc, gv) in g.iter_mut().enumerate() {
                    *gv = line.combo.iter().map(|&(p, x)| x * tab2[p][bc]).sum();
                }
                let mut s = c64::new(0.0, 0.0);
                for ops in &line.operands {
                    let (x1, x2) = (&ops[0], &ops[1]);
                    let r1 = x1.row(a);
                    for b in 0..n {
                        let r2 = x2.row(b);
                        let gb = &g[b * n..(b + 1) * n];
                        let mut inner = c64::new(0.0, 0.0);
                        for c in 0..n {
                            inner += r2[c] * w[c] * gb[c];
                        }
                        s += r1[b] * inner;
                    }
                }
                acc += s * frame.kappa[a].powi(line.kpow - 6);
            }
            Ok(acc * frame.v0[a])
        })
        .collect::<Result<_>>()?;
    let total: c64 = rows.iter().sum::<c64>() * functional.prefactor.to_f64();
    Ok(TauValue { value: total.re, imag: total.im, volume: frame.volume() })
}

/// One spectral run: the heat fits and the functional on one representation.
#[derive(Clone, Debug, Serialize)]
pub struct SpecReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub theta: Theta,
    pub h: String,
    /// Unconstrained fit `(c_{-3/2}, c_{-1/2}, c_{1/2})`.
    pub coeffs: [f64; 3],
    pub residual: f64,
    /// `c_{-1/2}` with `c_{-3/2}` held at `pi^(3/2) tau(k^-6)`.
    pub curvature_coeff: f64,
    pub curvature_residual: f64,
    /// `tau(k^-6)` and the relative gap of the fitted volume term to `pi^(3/2) tau(k^-6)`.
    pub volume: f64,
    pub volume_gap: f64,
    pub tau_curvature: f64,
    /// `c_{-1/2} / tau(k^-6 S)`; absent for flat h.
    pub ratio: Option<f64>,
    pub t_grid: Vec<f64>,
    pub eigenvalues: usize,
    pub smallest_eigenvalue: f64,
}

/// Eigenvalues of `P` on the whole window.
pub fn spectrum(rep: &TorusRep) -> Result<Vec<f64>> {
    let per_block: Vec<Vec<f64>> = rep.blocks().par_iter().map(p_spectrum).collect::<Result<_>>()?;
    let mut ev: Vec<f64> = per_block.into_iter().flatten().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Heat fits only, for convergence checks that do not need the functional.
pub fn fit_only(rep: &TorusRep, grid: &TGrid) -> Result<(HeatFit, HeatFit)> {
    let ev = spectrum(rep)?;
    let frame = Frame::new(rep)?;
    let free = heat_fit(&ev, rep.n, grid)?;
    let fixed = curvature_fit(&ev, rep.n, grid, PI.powf(1.5) * frame.volume())?;
    Ok((free, fixed))
}

pub fn spec_run(rep: &TorusRep, grid: &TGrid, functional: &CurvatureFunctional) -> Result<SpecReport> {
    let ev = spectrum(rep)?;
    let tau = tau_curvature(rep, functional)?;
    let scale = tau.value.abs().max(1e-300);
    if tau.imag.abs() > 1e-8 * scale.max(1e-12) {
        return Err(Error::Spectral(format!("tau(k^-6 S) has imaginary part {:e}", tau.imag)));
    }
    let c_vol = PI.powf(1.5) * tau.volume;
    let free = heat_fit(&ev, rep.n, grid)?;
    let fixed = curvature_fit(&ev, rep.n, grid, c_vol)?;
    let ratio = (!rep.h.is_flat()).then(|| fixed.coeffs[1] / tau.value);
    Ok(SpecReport {
        n: rep.n,
        theta: rep.theta,
        h: rep.h.to_string(),
        coeffs: free.coeffs,
        residual: free.residual,
        curvature_coeff: fixed.coeffs[1],
        curvature_residual: fixed.residual,
        volume: tau.volume,
        volume_gap: (free.coeffs[0] - c_vol).abs() / c_vol,
        tau_curvature: tau.value,
        ratio,
        t_grid: grid.times().to_vec(),
        eigenvalues: ev.len(),
        smallest_eigenvalue: ev.first().copied().unwrap_or(0.0),
    })
}

/// Ratios across several representations and their relative spread.
#[derive(Clone, Debug, Serialize)]
pub struct Consistency {
    pub runs: Vec<SpecReport>,
    pub ratios: BTreeMap<String, f64>,
    pub mean_ratio: f64,
    /// `(max - min) / |mean|` over the non-flat runs.
    pub spread: f64,
}

pub fn curvature_consistency(reports: Vec<SpecReport>) -> Result<Consistency> {
    let ratios: BTreeMap<String, f64> =
        reports.iter().filter_map(|r| r.ratio.map(|x| (format!("N={} theta={} h={}", r.n, r.theta, r.h), x))).collect();
    if ratios.len() < 2 {
        return Err(Error::Config("consistency needs at least two non-flat runs".into()));
    }
    let vals: Vec<f64> = ratios.values().copied().collect();
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    let (lo, hi) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
    Ok(Consistency { runs: reports, ratios, mean_ratio: mean, spread: (hi - lo) / mean.abs() })
}

/// Conformal factors of the default consistency check. Supports are unit
/// modes in one coordinate plane: blocks stay small and the default window
/// lies in the asymptotic regime.
pub fn default_cases() -> Vec<(Theta, HSpec)> {
    vec![
        (Theta([0.0, 0.0, 0.0]), HSpec::flat().cos(0.1, [1, 0, 0])),
        (Theta([0.3817, 0.0, 0.0]), HSpec::flat().cos(0.08, [1, 0, 0]).cos(0.06, [0, 1, 0])),
        (Theta([0.0, 0.25, 0.0]), HSpec::flat().cos(0.07, [1, 0, 0]).sin(0.05, [0, 0, 1])),
    ]
}
