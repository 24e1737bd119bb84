use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::hfun::{
    commutative_limit, contour_pieces, exact_limit, h_closed, h_quad, HIndex, CLOSED_FORMS, DEFAULT_TOL,
};
use crate::integrate::{br_diff, golden, normalized_moment, theorem_diff_with_evidence, Discrepancy, DiscrepancyKind};
use crate::ncalg::{Coeff, DWord, SUM};
use crate::pipeline::Derivation;
use crate::symcalc::check_parametrix;

/// Tolerance of closed forms against quadrature.
pub const HFUN_TOL: f64 = 1e-8;
/// Tolerance of the contour pieces against their closed values.
pub const CONTOUR_TOL: f64 = 1e-8;
/// Tolerance of numeric sphere averages against the moment table.
pub const MOMENT_TOL: f64 = 1e-12;

/// Theorem-diff entries that are transcription artifacts of the reference
/// listing: `(kind, golden line, operands)`.
pub const KNOWN_THEOREM_DISCREPANCIES: [(DiscrepancyKind, Option<usize>, &str); 2] = [
    (DiscrepancyKind::Coefficient, Some(24), "D^(3/2)[di k] | D^(1/2)[di k]"),
    (DiscrepancyKind::MissingLine, None, "D^(3/2)[di k] | D^(1/3)[di k]"),
];

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub warnings: Vec<String>,
    pub details: Value,
}

impl CheckReport {
    fn new(name: &str, passed: bool, warnings: Vec<String>, details: Value) -> Self {
        CheckReport { name: name.into(), passed, warnings, details }
    }
}

pub fn parametrix(d: &Derivation) -> Result<CheckReport> {
    let r = check_parametrix(&d.resolvent)?;
    Ok(CheckReport::new("parametrix", r.passed(), vec![], serde_json::to_value(&r)?))
}

fn is_known(x: &Discrepancy) -> bool {
    KNOWN_THEOREM_DISCREPANCIES.iter().any(|(k, line, ops)| x.kind == *k && x.golden_line == *line && x.operands == *ops)
}

pub fn theorem(d: &Derivation) -> Result<CheckReport> {
    let bd = br_diff(&d.br, &golden::br_ordered()?);
    let td = theorem_diff_with_evidence(&d.functional, &golden::theorem()?, Some(&d.br))?;
    let warnings: Vec<String> = td
        .discrepancies
        .iter()
        .filter(|x| is_known(x))
        .map(|x| match x.duplicate_of {
            Some(j) => format!("golden line {} repeats line {j} verbatim ({})", x.golden_line.unwrap_or(0), x.operands),
            None => format!("computed line {} [{}] has no golden counterpart", x.operands, x.computed),
        })
        .collect();
    let unknown = td.discrepancies.iter().filter(|x| !is_known(x)).count();
    let passed = bd.is_exact() && unknown == 0;
    let details = json!({
        "br": bd,
        "br_terms": d.br.len(),
        "golden_lines": td.golden_lines,
        "computed_lines": td.computed_lines,
        "matched": td.matched.len(),
        "discrepancies": td.discrepancies,
    });
    Ok(CheckReport::new("theorem", passed, warnings, details))
}

pub fn commutative(d: &Derivation) -> Result<CheckReport> {
    let pi = |n: i64| Coeff::new(n.into(), 2);
    let ddk = (3, vec![DWord::k(&[SUM, SUM])]);
    let dk2 = (2, vec![DWord::k(&[SUM]), DWord::k(&[SUM])]);
    let mut rows = Vec::new();
    let mut passed = true;
    for (label, f) in [("computed", d.functional.clone()), ("golden", golden::theorem()?)] {
        let lim = commutative_limit(&f)?;
        let a = lim.poly.coeff(ddk.0, &ddk.1);
        let b = lim.poly.coeff(dk2.0, &dk2.1);
        let ok = lim.poly.len() == 2 && a == pi(-1) && b == pi(2);
        passed &= ok;
        rows.push(json!({
            "functional": label,
            "k^3 [di di k]": a.to_string(),
            "k^2 [di k] [di k]": b.to_string(),
            "breakdown": lim.breakdown_text(&ddk),
            "log_form": lim.log.map(|l| l.to_string()),
            "passed": ok,
        }));
    }
    Ok(CheckReport::new("commutative", passed, vec![], json!({ "expected": "-pi k^3 [di di k] + 2 pi k^2 [di k]^2", "rows": rows })))
}

fn log_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| 0.1 * 100f64.powf(i as f64 / (n - 1) as f64)).collect()
}

pub fn hfun(seed: u64) -> Result<CheckReport> {
    let grid = log_grid(7);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut worst_at = Value::Null;
    let mut per_index = Vec::new();
    for m in CLOSED_FORMS {
        let idx = HIndex::new(m)?;
        let mut points: Vec<Vec<f64>> = if m.len() == 2 {
            grid.iter().map(|&x| vec![x]).collect()
        } else {
            grid.iter().flat_map(|&x| grid.iter().map(move |&y| vec![x, y])).collect()
        };
        points.extend((0..5).map(|_| (1..m.len()).map(|_| 10f64.powf(rng.gen_range(-1.0..1.0))).collect()));
        let mut idx_worst: f64 = 0.0;
        for p in &points {
            let c = h_closed(&idx, p)?.value;
            let q = h_quad(&idx, p, DEFAULT_TOL)?.value;
            let rel = (c - q).abs() / q.abs();
            if rel > worst {
                worst = rel;
                worst_at = json!({ "index": idx.to_string(), "args": p });
            }
            idx_worst = idx_worst.max(rel);
        }
        let one = vec![1.0; m.len() - 1];
        let lim = exact_limit(&idx);
        let lim_gap = (h_closed(&idx, &one)?.value - lim.to_f64()).abs() / lim.to_f64();
        worst = worst.max(lim_gap);
        per_index.push(json!({
            "index": idx.to_string(),
            "points": points.len(),
            "max_rel_err": idx_worst,
            "limit": lim.to_string(),
            "limit_rel_err": lim_gap,
        }));
    }
    // symmetry H_{m0, 1, 1}(x, y) = H_{m0, 1, 1}(y, x)
    let mut sym: f64 = 0.0;
    for m0 in 1..=3u32 {
        let idx = HIndex::new(&[m0, 1, 1])?;
        for &x in &grid {
            for &y in &grid {
                let a = h_closed(&idx, &[x, y])?.value;
                let b = h_closed(&idx, &[y, x])?.value;
                sym = sym.max((a - b).abs() / a.abs());
            }
        }
    }
    let passed = worst <= HFUN_TOL && sym <= 1e-10;
    let details = json!({
        "tolerance": HFUN_TOL,
        "seed": seed,
        "max_rel_err": worst,
        "worst": worst_at,
        "symmetry_max_rel_err": sym,
        "indices": per_index,
    });
    Ok(CheckReport::new("hfun", passed, vec![], details))
}

/// Sphere average of `xi^e` by a trapezoid rule in the azimuth (exact for
/// trigonometric polynomials) and double-exponential quadrature in `z`.
pub fn sphere_average(e: [u8; 3]) -> f64 {
    const M: usize = 32;
    let ang = |z: f64| -> f64 {
        let rho = (1.0 - z * z).max(0.0).sqrt();
        let s: f64 = (0..M)
            .map(|i| {
                let phi = 2.0 * PI * i as f64 / M as f64;
                (rho * phi.cos()).powi(e[0].into()) * (rho * phi.sin()).powi(e[1].into())
            })
            .sum();
        s / M as f64 * z.powi(e[2].into())
    };
    quadrature::double_exponential::integrate(ang, -1.0, 1.0, 1e-14).integral / 2.0
}

pub fn angular() -> Result<CheckReport> {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for a in 0..=8u8 {
        for b in 0..=(8 - a) {
            for c in 0..=(8 - a - b) {
                let exact = normalized_moment([a, b, c])?;
                let want = *exact.numer() as f64 / *exact.denom() as f64;
                // the table is normalized by 4 pi / 3, i.e. three sphere averages
                worst = worst.max((3.0 * sphere_average([a, b, c]) - want).abs());
                count += 1;
            }
        }
    }
    let pieces = contour_pieces(1.0);
    let total = pieces.total();
    let target = -2.0 * PI.sqrt();
    let total_err = ((total.re - target).powi(2) + total.im.powi(2)).sqrt();
    let arc_err = (pieces.c2 - pieces.c2_erf).norm();
    let passed = worst <= MOMENT_TOL && total_err <= CONTOUR_TOL && arc_err <= CONTOUR_TOL;
    let details = json!({
        "moments": count,
        "moment_max_abs_err": worst,
        "contour": pieces,
        "contour_target": target,
        "contour_total_err": total_err,
        "arc_vs_erf_err": arc_err,
    });
    Ok(CheckReport::new("angular", passed, vec![], details))
}
