use std::f64::consts::PI;

use faer::linalg::solvers::SolveLstsq;
use faer::Mat;
use serde::Serialize;

use crate::error::{Error, Result};

/// Modes at the cutoff must weigh less than this at the smallest time.
pub const CUTOFF_WEIGHT: f64 = 1e-10;

/// Default fitting window and grid size.
pub const DEFAULT_TMIN: f64 = 0.65;
pub const DEFAULT_TMAX: f64 = 1.3;
pub const DEFAULT_POINTS: usize = 27;

/// Strictly decreasing times inside the truncation-validity window.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TGrid(Vec<f64>);

impl TGrid {
    /// Smallest admissible time for cutoff `n`: `exp(-t n^2) <= CUTOFF_WEIGHT`.
    pub fn min_time(n: usize) -> f64 {
        -CUTOFF_WEIGHT.ln() / (n * n) as f64
    }

    pub fn new(n: usize, tmin: f64, tmax: f64, points: usize) -> Result<Self> {
        let lo = Self::min_time(n);
        if !(tmin.is_finite() && tmax.is_finite()) || tmin <= 0.0 {
            return Err(Error::Window(format!("bad bounds [{tmin}, {tmax}]")));
        }
        if tmin < lo {
            return Err(Error::Window(format!("tmin = {tmin} < {lo:.4}: cutoff modes at N = {n} are not negligible")));
        }
        if tmax <= tmin || points < 4 {
            return Err(Error::Window(format!("need tmax > tmin and at least 4 points, got [{tmin}, {tmax}] x {points}")));
        }
        let step = (tmax - tmin) / (points - 1) as f64;
        Ok(TGrid((0..points).map(|i| tmax - step * i as f64).collect()))
    }

    pub fn default_for(n: usize) -> Result<Self> {
        Self::new(n, DEFAULT_TMIN, DEFAULT_TMAX, DEFAULT_POINTS)
    }

    pub fn times(&self) -> &[f64] {
        &self.0
    }
}

/// `Tr exp(-tP)` from the spectrum.
pub fn heat_trace(spectrum: &[f64], t: f64) -> f64 {
    spectrum.iter().map(|mu| (-t * mu).exp()).sum()
}

/// `(sum_{|m| <= n} exp(-t m^2))^3`, the truncated flat trace.
pub fn flat_trace(n: usize, t: f64) -> f64 {
    let n = n as i32;
    let s: f64 = (-n..=n).map(|m| (-t * f64::from(m * m)).exp()).sum();
    s * s * s
}

/// Heat trace with the truncation and lattice effects of the flat torus
/// replaced by the flat asymptotics `(pi / t)^(3/2)`.
pub fn corrected_trace(spectrum: &[f64], n: usize, t: f64) -> f64 {
    heat_trace(spectrum, t) - flat_trace(n, t) + (PI / t).powf(1.5)
}

/// Least-squares fit `t^(-3/2) (c_{-3/2} + c_{-1/2} t + c_{1/2} t^2)`.
#[derive(Clone, Debug, Serialize)]
pub struct HeatFit {
    pub t_grid: TGrid,
    pub coeffs: [f64; 3],
    /// `|A c - y| / |y|`.
    pub residual: f64,
}

fn lstsq(rows: &[Vec<f64>], y: &[f64]) -> Result<(Vec<f64>, f64)> {
    let (m, k) = (rows.len(), rows[0].len());
    let a = Mat::<f64>::from_fn(m, k, |i, j| rows[i][j]);
    let b = Mat::<f64>::from_fn(m, 1, |i, _| y[i]);
    let c = a.qr().solve_lstsq(&b);
    let coeffs: Vec<f64> = (0..k).map(|j| c[(j, 0)]).collect();
    if coeffs.iter().any(|x| !x.is_finite()) {
        return Err(Error::Spectral("heat fit is singular".into()));
    }
    let r = &a * &c - &b;
    let ynorm = b.norm_l2();
    Ok((coeffs, if ynorm > 0.0 { r.norm_l2() / ynorm } else { r.norm_l2() }))
}

/// Unconstrained three-term fit of the corrected trace.
pub fn heat_fit(spectrum: &[f64], n: usize, grid: &TGrid) -> Result<HeatFit> {
    let ts = grid.times();
    let rows: Vec<Vec<f64>> = ts.iter().map(|&t| (0..3).map(|p| t.powf(p as f64 - 1.5)).collect()).collect();
    let y: Vec<f64> = ts.iter().map(|&t| corrected_trace(spectrum, n, t)).collect();
    let (c, residual) = lstsq(&rows, &y)?;
    Ok(HeatFit { t_grid: grid.clone(), coeffs: [c[0], c[1], c[2]], residual })
}

/// Fit of `c_{-1/2}` and `c_{1/2}` with the volume term held at `c_{-3/2}`.
/// The volume term is known exactly, which stabilizes the curvature term.
pub fn curvature_fit(spectrum: &[f64], n: usize, grid: &TGrid, c_vol: f64) -> Result<HeatFit> {
    let ts = grid.times();
    let rows: Vec<Vec<f64>> = ts.iter().map(|&t| vec![t.powf(-0.5), t.powf(0.5)]).collect();
    let y: Vec<f64> = ts.iter().map(|&t| corrected_trace(spectrum, n, t) - c_vol * t.powf(-1.5)).collect();
    let (c, residual) = lstsq(&rows, &y)?;
    Ok(HeatFit { t_grid: grid.clone(), coeffs: [c_vol, c[0], c[1]], residual })
}
