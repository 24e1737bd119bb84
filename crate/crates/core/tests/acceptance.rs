//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use common::{radial_oracle_error, resolvent_oracle_error, seed, sphere_oracle_error};
use nctorus::cli::checks;
use nctorus::hfun::{commutative_limit, contour_constant, contour_pieces, exact_limit, HIndex};
use nctorus::integrate::golden;
use nctorus::ncalg::{Coeff, DWord, SUM};
use nctorus::pipeline::{derive, Derivation, DeriveOptions, FROZEN_B2_COUNT};
use nctorus::speclab::{curvature_consistency, default_cases, spec_run, HSpec, TGrid, Theta, TorusRep};
use num_rational::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PARAMETRIX_SECONDS: f64 = 60.0;
const THEOREM_MIN_MATCHED: usize = 45;
const HFUN_TOL: f64 = 1e-8;
const HFUN_SYMMETRY_TOL: f64 = 1e-10;
const CONTOUR_TOL: f64 = 1e-6;
const B2_MIN_TERMS: usize = 800;
const ORACLE_POINTS: usize = 20;
const ORACLE_TOL: f64 = 1e-8;
const SPECTRAL_N: usize = 6;
const SPECTRAL_MAX_SPREAD: f64 = 0.10;
const SPECTRAL_FLAT_TOL: f64 = 1e-8;
const SPECTRAL_SECONDS: f64 = 600.0;

type Outcome = Result<String, String>;

fn pi(n: i64, d: i64) -> Coeff {
    Coeff::new(Rational64::new(n, d), 2)
}

fn parametrix(d: &Derivation) -> Outcome {
    let start = Instant::now();
    let r = checks::parametrix(d).map_err(|e| e.to_string())?;
    let secs = d.elapsed.as_secs_f64() + start.elapsed().as_secs_f64();
    let residuals: Vec<String> = r.details["checks"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|c| format!("{}:{}", c["order"], c["residual"]))
        .collect();
    let msg = format!("residual terms by order [{}], {secs:.2} s", residuals.join(", "));
    if r.passed && residuals.len() == 3 && secs < PARAMETRIX_SECONDS {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn theorem(d: &Derivation) -> Outcome {
    let r = checks::theorem(d).map_err(|e| e.to_string())?;
    let matched = r.details["matched"].as_u64().unwrap_or(0) as usize;
    let golden = r.details["golden_lines"].as_u64().unwrap_or(0);
    let evidence = r.details["discrepancies"]
        .as_array()
        .map(|xs| xs.iter().all(|x| x["evidence"].as_array().is_some_and(|e| !e.is_empty())))
        .unwrap_or(false);
    let msg = format!("{matched}/{golden} lines exact, {} flagged with B(r) evidence", r.warnings.len());
    if r.passed && matched >= THEOREM_MIN_MATCHED && r.warnings.len() == 2 && evidence {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn commutative(d: &Derivation) -> Outcome {
    let lim = commutative_limit(&d.functional).map_err(|e| e.to_string())?;
    let ddk = (3, vec![DWord::k(&[SUM, SUM])]);
    let dk2 = (2, vec![DWord::k(&[SUM]), DWord::k(&[SUM])]);
    let mut parts: Vec<Coeff> = lim.breakdown[&ddk]
        .iter()
        .map(|(h, c)| *c * exact_limit(&HIndex::new(h).expect("valid index")))
        .collect();
    parts.sort_by_key(|c| c.q());
    let want_parts = vec![pi(-5, 2), pi(-9, 4), pi(15, 4)];
    let log = lim.log.as_ref().map(|l| l.to_string()).unwrap_or_default();
    let golden_ok = checks::commutative(d).map(|r| r.passed).unwrap_or(false);
    let msg = format!(
        "k^3 [di di k]: {} = {}, k^2 [di k]^2: {}, log form: {log}",
        parts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" + "),
        lim.poly.coeff(ddk.0, &ddk.1),
        lim.poly.coeff(dk2.0, &dk2.1)
    );
    let ok = parts == want_parts
        && lim.poly.coeff(ddk.0, &ddk.1) == pi(-1, 1)
        && lim.poly.coeff(dk2.0, &dk2.1) == pi(2, 1)
        && log == "-pi k^4 [di di log k] + pi k^4 [di log k] [di log k]"
        && golden_ok;
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn hfun() -> Outcome {
    let r = checks::hfun(seed()).map_err(|e| e.to_string())?;
    let worst = r.details["max_rel_err"].as_f64().unwrap_or(f64::INFINITY);
    let sym = r.details["symmetry_max_rel_err"].as_f64().unwrap_or(f64::INFINITY);
    let msg = format!("max closed/quadrature deviation {worst:.1e} (tol {HFUN_TOL:e}), symmetry {sym:.1e} (tol {HFUN_SYMMETRY_TOL:e})");
    if worst <= HFUN_TOL && sym <= HFUN_SYMMETRY_TOL {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn contour() -> Outcome {
    let c = contour_constant();
    let p = contour_pieces(1.0);
    let want = -2.0 * PI.sqrt();
    let err = (c.value - want).abs();
    let arc = (p.c2 - p.c2_erf).norm();
    let msg = format!("total {:.12} vs -2 sqrt(pi) = {want:.12}, |diff| {err:.1e}, arc vs erf {arc:.1e}", c.value);
    if err <= CONTOUR_TOL && arc <= CONTOUR_TOL {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn b2_count(d: &Derivation) -> Outcome {
    let n = d.counts().b[2];
    let msg = format!("b2 has {n} merged terms (> {B2_MIN_TERMS}, frozen {FROZEN_B2_COUNT})");
    if n > B2_MIN_TERMS && n == FROZEN_B2_COUNT {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn scalar_oracle(d: &Derivation) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed());
    let e1 = resolvent_oracle_error(&d.resolvent, ORACLE_POINTS, &mut rng);
    let e2 = sphere_oracle_error(&d.resolvent, &d.br, ORACLE_POINTS, &mut rng);
    let e3 = radial_oracle_error(&d.br, &[0.5, 1.0, 2.0], ORACLE_POINTS, &mut rng);
    let msg = format!("{ORACLE_POINTS} points: b_n {e1:.1e}, sphere average {e2:.1e}, radial integral {e3:.1e} (tol {ORACLE_TOL:e})");
    if e1.max(e2).max(e3) <= ORACLE_TOL {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn spectral(d: &Derivation) -> Outcome {
    let start = Instant::now();
    let grid = TGrid::default_for(SPECTRAL_N).map_err(|e| e.to_string())?;
    let run = |theta: Theta, h: HSpec| {
        TorusRep::new(theta, SPECTRAL_N, h).and_then(|rep| spec_run(&rep, &grid, &d.functional))
    };
    let runs = default_cases().into_iter().map(|(t, h)| run(t, h)).collect::<Result<Vec<_>, _>>();
    let c = curvature_consistency(runs.map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let flat = run(Theta([0.3817, 0.25, 0.0]), HSpec::flat()).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let ratios: Vec<String> = c.ratios.values().map(|r| format!("{r:.4}")).collect();
    let msg = format!(
        "N = {SPECTRAL_N} ratios [{}], spread {:.2}% (max {:.0}%), flat c_-1/2 = {:.1e}, {secs:.1} s",
        ratios.join(", "),
        100.0 * c.spread,
        100.0 * SPECTRAL_MAX_SPREAD,
        flat.curvature_coeff
    );
    let ok = c.ratios.len() == 3
        && c.spread < SPECTRAL_MAX_SPREAD
        && flat.curvature_coeff.abs() <= SPECTRAL_FLAT_TOL.max(flat.curvature_residual)
        && flat.ratio.is_none()
        && secs < SPECTRAL_SECONDS;
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() {
    let d = match derive(DeriveOptions::default()) {
        Ok(d) => d,
        Err(e) => {
            println!("FAIL derivation: {e}");
            std::process::exit(1);
        }
    };
    if let Err(e) = golden::theorem().and(golden::br_ordered()) {
        println!("FAIL golden files: {e}");
        std::process::exit(1);
    }
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("parametrix identity", Box::new(|| parametrix(&d))),
        ("theorem reproduction", Box::new(|| theorem(&d))),
        ("commutative limit", Box::new(|| commutative(&d))),
        ("H-function closed forms", Box::new(hfun)),
        ("contour constant", Box::new(contour)),
        ("b2 term count", Box::new(|| b2_count(&d))),
        ("scalar-model oracle", Box::new(|| scalar_oracle(&d))),
        ("spectral proportionality", Box::new(|| spectral(&d))),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("PASS {} {name}: {msg}", n + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg}", n + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
