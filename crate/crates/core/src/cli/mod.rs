//! Command-line front end of the `nct3` binary.

pub mod checks;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::hfun::{h_closed, h_quad, HIndex, DEFAULT_TOL};
use crate::integrate::Convention;
use crate::pipeline::{derive, Derivation, DeriveOptions, FROZEN_B2_COUNT};
use crate::speclab::{
    curvature_consistency, default_cases, spec_run, HSpec, TGrid, Theta, TorusRep, DEFAULT_POINTS, DEFAULT_TMAX,
    DEFAULT_TMIN,
};

pub use checks::CheckReport;

/// Environment variable fixing the worker thread count.
pub const THREADS_ENV: &str = "NCT3_THREADS";

/// Default seed for randomized sample points.
pub const DEFAULT_SEED: u64 = 20_261_015;

#[derive(Debug, Parser)]
#[command(name = "nct3", version, about = "Scalar curvature of the conformally perturbed noncommutative 3-torus")]
pub struct Cli {
    /// Seed for randomized sample points.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Constant conformal factor: drop every term carrying a derivative of k.
    #[arg(long, global = true)]
    pub flat: bool,
    /// Emit lines with the raw prefactor -2 sqrt(pi)/3 instead of -4 sqrt(pi)/3.
    #[arg(long, global = true)]
    pub raw: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the derivation, write functional.json and functional.tex, print term counts.
    Derive {
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Also write the term counts as regression data to this file.
        #[arg(long)]
        freeze_counts: Option<PathBuf>,
    },
    /// Run verification checks and print a JSON report; exits 1 on failure.
    Check {
        #[arg(value_enum)]
        which: CheckKind,
    },
    /// Evaluate H-functions.
    Hfun {
        #[command(subcommand)]
        command: HfunCommand,
    },
    /// Truncated matrix model and heat-trace fits.
    Speclab {
        #[command(subcommand)]
        command: SpeclabCommand,
    },
    /// Print the curvature functional.
    Export {
        #[arg(value_enum)]
        format: ExportFormat,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Parametrix,
    Theorem,
    Commutative,
    Hfun,
    Angular,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Json,
    Latex,
}

#[derive(Debug, Subcommand)]
pub enum HfunCommand {
    /// Closed form and, optionally, quadrature at one point.
    Eval {
        /// Index `m0,m1[,m2]`.
        #[arg(long)]
        index: String,
        /// Arguments `x[,y]`.
        #[arg(long)]
        args: String,
        /// Also integrate numerically.
        #[arg(long)]
        quad: bool,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

#[derive(Debug, Args)]
pub struct Window {
    #[arg(long, default_value_t = DEFAULT_TMIN)]
    pub tmin: f64,
    #[arg(long, default_value_t = DEFAULT_TMAX)]
    pub tmax: f64,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    pub points: usize,
}

#[derive(Debug, Subcommand)]
pub enum SpeclabCommand {
    /// Heat-trace fit and curvature ratio for one conformal factor.
    Run {
        #[arg(long = "N", default_value_t = 6)]
        n: usize,
        /// `t12,t13,t23`.
        #[arg(long, default_value = "0,0,0")]
        theta: String,
        /// Conformal factor, e.g. `0.1:cos(1,0,0);0.05:sin(0,1,0)`.
        #[arg(long, default_value = "0.1:cos(1,0,0)")]
        h: String,
        #[command(flatten)]
        window: Window,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ratio spread over the three default conformal factors.
    Consistency {
        #[arg(long = "N", default_value_t = 6)]
        n: usize,
        #[command(flatten)]
        window: Window,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Writes through a temporary file in the target directory and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Sizes the global thread pool from [`THREADS_ENV`] when set.
pub fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.parse().map_err(|_| Error::Config(format!("{THREADS_ENV}={v:?} is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn options(cli: &Cli) -> DeriveOptions {
    DeriveOptions { convention: if cli.raw { Convention::Raw } else { Convention::Theorem }, flat: cli.flat }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',').map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("{what} entry {x:?}")))).collect()
}

fn emit(value: &serde_json::Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    if let Some(p) = out {
        write_atomic(p, text.as_bytes())?;
    }
    print!("{text}");
    Ok(())
}

pub fn run_checks(which: CheckKind, seed: u64, opts: DeriveOptions) -> Result<Vec<CheckReport>> {
    let needs_derivation = matches!(which, CheckKind::Parametrix | CheckKind::Theorem | CheckKind::Commutative | CheckKind::All);
    let d: Option<Derivation> = if needs_derivation { Some(derive(opts)?) } else { None };
    let d = d.as_ref();
    let mut out = Vec::new();
    let want = |k: CheckKind| which == k || which == CheckKind::All;
    if want(CheckKind::Parametrix) {
        out.push(checks::parametrix(d.expect("derived"))?);
    }
    if want(CheckKind::Theorem) {
        out.push(checks::theorem(d.expect("derived"))?);
    }
    if want(CheckKind::Commutative) {
        out.push(checks::commutative(d.expect("derived"))?);
    }
    if want(CheckKind::Hfun) {
        out.push(checks::hfun(seed)?);
    }
    if want(CheckKind::Angular) {
        out.push(checks::angular()?);
    }
    Ok(out)
}

fn hfun_eval(index: &str, args: &str, quad: bool, tol: f64) -> Result<serde_json::Value> {
    let idx: HIndex = index.parse()?;
    let x: Vec<f64> = parse_list(args, "argument")?;
    let closed = match h_closed(&idx, &x) {
        Ok(v) => Some(v),
        Err(Error::UnsupportedIndex(_)) => None,
        Err(e) => return Err(e),
    };
    let quad = if quad || closed.is_none() { Some(h_quad(&idx, &x, tol)?) } else { None };
    let diff = match (&closed, &quad) {
        (Some(c), Some(q)) => Some((c.value - q.value).abs()),
        _ => None,
    };
    Ok(json!({
        "index": idx.m(),
        "args": x,
        "closed": closed.as_ref().map(|v| v.value),
        "quad": quad.as_ref().map(|v| v.value),
        "diff": diff,
        "quad_error": quad.as_ref().map(|v| v.error),
    }))
}

/// Runs one command; returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    init_threads()?;
    let opts = options(&cli);
    match &cli.command {
        Command::Derive { out_dir, freeze_counts } => {
            let d = derive(opts)?;
            std::fs::create_dir_all(out_dir)?;
            let json = serde_json::to_string_pretty(&d.functional.to_json())? + "\n";
            write_atomic(&out_dir.join("functional.json"), json.as_bytes())?;
            write_atomic(&out_dir.join("functional.tex"), d.functional.to_latex().as_bytes())?;
            let counts = d.counts();
            if let Some(p) = freeze_counts {
                write_atomic(p, (serde_json::to_string_pretty(&counts)? + "\n").as_bytes())?;
            }
            if !cli.flat && counts.b.get(2) != Some(&FROZEN_B2_COUNT) {
                eprintln!("warning: b2 has {:?} terms, frozen value is {FROZEN_B2_COUNT}", counts.b.get(2));
            }
            let report = json!({
                "counts": counts,
                "elapsed_ms": d.elapsed.as_millis() as u64,
                "files": [out_dir.join("functional.json"), out_dir.join("functional.tex")],
            });
            emit(&report, None)?;
            Ok(0)
        }
        Command::Check { which } => {
            let reports = run_checks(*which, cli.seed, opts)?;
            let passed = reports.iter().all(|r| r.passed);
            for r in &reports {
                for w in &r.warnings {
                    eprintln!("warning [{}]: {w}", r.name);
                }
            }
            emit(&json!({ "passed": passed, "checks": reports }), None)?;
            Ok(if passed { 0 } else { 1 })
        }
        Command::Hfun { command: HfunCommand::Eval { index, args, quad, tol } } => {
            emit(&hfun_eval(index, args, *quad, *tol)?, None)?;
            Ok(0)
        }
        Command::Speclab { command } => {
            let f = derive(opts)?.functional;
            match command {
                SpeclabCommand::Run { n, theta, h, window, out } => {
                    let rep = TorusRep::new(theta.parse::<Theta>()?, *n, h.parse::<HSpec>()?)?;
                    let grid = TGrid::new(*n, window.tmin, window.tmax, window.points)?;
                    let report = spec_run(&rep, &grid, &f)?;
                    emit(&serde_json::to_value(&report)?, out.as_deref())?;
                }
                SpeclabCommand::Consistency { n, window, out } => {
                    let grid = TGrid::new(*n, window.tmin, window.tmax, window.points)?;
                    let runs = default_cases()
                        .into_iter()
                        .map(|(theta, h)| spec_run(&TorusRep::new(theta, *n, h)?, &grid, &f))
                        .collect::<Result<Vec<_>>>()?;
                    emit(&serde_json::to_value(curvature_consistency(runs)?)?, out.as_deref())?;
                }
            }
            Ok(0)
        }
        Command::Export { format, out } => {
            let f = derive(opts)?.functional;
            let text = match format {
                ExportFormat::Json => serde_json::to_string_pretty(&f.to_json())? + "\n",
                ExportFormat::Latex => f.to_latex(),
            };
            match out {
                Some(p) => write_atomic(p, text.as_bytes())?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.json");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn parses_commands() {
        let c = Cli::try_parse_from(["nct3", "hfun", "eval", "--index", "3,1,1", "--args", "0.5,2", "--quad"]).unwrap();
        assert!(matches!(c.command, Command::Hfun { command: HfunCommand::Eval { quad: true, .. } }));
        let c = Cli::try_parse_from(["nct3", "speclab", "run", "--N", "8", "--theta", "0.25,0,0"]).unwrap();
        assert!(matches!(c.command, Command::Speclab { command: SpeclabCommand::Run { n: 8, .. } }));
        assert!(Cli::try_parse_from(["nct3", "check", "bogus"]).is_err());
    }

    #[test]
    fn hfun_eval_report() {
        let v = hfun_eval("1,1", "4", true, 1e-10).unwrap();
        assert!((v["closed"].as_f64().unwrap() - std::f64::consts::PI / 6.0).abs() < 1e-14);
        assert!(v["diff"].as_f64().unwrap() < 1e-9);
        let v = hfun_eval("1,1,1,1", "1,2,3", false, 1e-8).unwrap();
        assert!(v["closed"].is_null() && v["quad"].as_f64().is_some());
    }
}
