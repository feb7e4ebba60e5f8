//! Command-line front end: `verify`, `search` and `transform`.
//!
//! Exit codes: 0 success, 1 certificate or search failure, 2 usage error.

pub mod suites;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::certificates::CertificateResult;
use crate::constructions::pipeline::Pipeline;
use crate::error::{Error, Result};
use crate::funcrep::json::{parse_spec, to_value};
use crate::funcrep::{FunctionSpec, Sign};
use crate::lp_search::{bisect_min_radius, GridParams, SearchOptions};
use crate::signtools::last_sign_change;
use crate::transforms::fourier_transform;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Sign {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "signlab", version, about = "Sign uncertainty numerics: certificates, eigenfunction searches, transforms")]
pub struct Cli {
    /// Output directory for reports.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Seed for randomised suites.
    #[arg(long, global = true, default_value_t = 20240601)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a named certificate suite.
    Verify {
        #[arg(long)]
        suite: String,
    },
    /// Bisect for the smallest LP-feasible radius.
    Search {
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum)]
        sign: SignArg,
        /// Number of parity-matching basis functions.
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        /// Chebyshev constraint points.
        #[arg(long, default_value_t = 400)]
        grid: usize,
    },
    /// Apply a pipeline file and report each stage.
    Transform {
        pipeline: PathBuf,
        /// Function spec replacing the pipeline's base.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Points of the plot CSV on [0, 4].
        #[arg(long, default_value_t = 401)]
        grid: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

/// Validated settings shared by the commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub out: PathBuf,
    pub seed: u64,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("--{name} must be positive, got {v}")))
    }
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, contents).map_err(|e| Error::Io(format!("{}: {e}", tmp.display())))?;
    fs::rename(&tmp, path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Caps rayon's pool when `SIGNLAB_THREADS` is set.
fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("SIGNLAB_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| usage(format!("SIGNLAB_THREADS must be a positive integer, got '{v}'")))?;
        if n == 0 {
            return Err(usage("SIGNLAB_THREADS must be positive"));
        }
        // a pool that already exists (tests, repeated calls) keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn is_usage(e: &Error) -> bool {
    matches!(e, Error::InvalidParameter(_) | Error::Parse { .. } | Error::Io(_) | Error::DimensionMismatch(..))
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if is_usage(&e) {
                EXIT_USAGE
            } else {
                EXIT_FAIL
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    configure_threads()?;
    let cfg = RunConfig { out: cli.out, seed: cli.seed };
    match cli.command {
        Command::Verify { suite } => cmd_verify(&cfg, &suite),
        Command::Search { dim, sign, degree, tol, grid } => cmd_search(&cfg, dim, sign.into(), degree, tol, grid),
        Command::Transform { pipeline, input, grid, tol } => cmd_transform(&cfg, &pipeline, input.as_deref(), grid, tol),
    }
}

fn print_results(results: &[CertificateResult]) {
    for r in results {
        println!("{:<4}  {:<40}  margin {:+.3e}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.margin);
        for n in &r.notes {
            println!("      {n}");
        }
    }
}

pub fn cmd_verify(cfg: &RunConfig, name: &str) -> Result<i32> {
    let s = suites::suite(name)?;
    let results = s.run(&suites::SuiteContext { seed: cfg.seed })?;
    print_results(&results);
    let passed = results.iter().all(|r| r.passed);
    let report = json!({
        "suite": name,
        "seed": cfg.seed,
        "passed": passed,
        "results": results.iter().map(|r| serde_json::from_str::<Value>(&r.to_json()).unwrap_or(Value::Null)).collect::<Vec<_>>(),
    });
    let path = cfg.out.join(format!("verify-{name}.json"));
    write_atomic(&path, &serde_json::to_string_pretty(&report).unwrap_or_default())?;
    println!("{} ({})", if passed { "suite passed" } else { "suite FAILED" }, path.display());
    Ok(if passed { EXIT_OK } else { EXIT_FAIL })
}

/// Basis size used when `--degree` is absent.
pub fn default_degree(dim: usize, sign: Sign) -> usize {
    match (dim, sign) {
        (1, Sign::Plus) => 60,
        (1, Sign::Minus) => 40,
        _ => 30,
    }
}

pub fn cmd_search(cfg: &RunConfig, dim: usize, sign: Sign, degree: Option<usize>, tol: f64, grid: usize) -> Result<i32> {
    if dim == 0 {
        return Err(usage("--dim must be at least 1"));
    }
    positive("tol", tol)?;
    if grid < 8 {
        return Err(usage(format!("--grid must be at least 8, got {grid}")));
    }
    let m = degree.unwrap_or_else(|| default_degree(dim, sign));
    if m < 2 {
        return Err(usage(format!("--degree must be at least 2, got {m}")));
    }
    let opts = SearchOptions { tol, grid: GridParams { points: grid, ..GridParams::default() }, ..SearchOptions::default() };
    let stem = format!("search-d{dim}-{}", if sign == Sign::Plus { "plus" } else { "minus" });
    match bisect_min_radius(dim, sign, m, &opts) {
        Ok(res) => {
            write_atomic(&cfg.out.join(format!("{stem}.json")), &res.to_json())?;
            write_atomic(&cfg.out.join(format!("{stem}.csv")), &res.trace_csv())?;
            println!(
                "d = {dim}, s = {}, m = {m}: r_upper = {:.6}, verified r(candidate) = {:.6}, {} LP solves",
                sign.name(),
                res.r_upper,
                res.verification.radius,
                res.bisection_trace.len()
            );
            Ok(EXIT_OK)
        }
        Err(e) if !is_usage(&e) => {
            eprintln!("search failed: {e}");
            Ok(EXIT_FAIL)
        }
        Err(e) => Err(e),
    }
}

/// Radius of the last sign change, or the reason there is none.
fn radius_or_reason(f: &FunctionSpec, tol: f64) -> Value {
    match last_sign_change(f, tol) {
        Ok(r) => json!(r.radius),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn stage_report(name: &str, f: &FunctionSpec, tol: f64) -> Value {
    let fhat = fourier_transform(f);
    let (f0, fhat0) = (f.value(0.0), fhat.as_ref().map(|h| h.value(0.0)).unwrap_or(f64::NAN));
    let r_f = radius_or_reason(f, tol);
    let (r_fhat, r_neg_fhat) = match &fhat {
        Ok(h) => (radius_or_reason(h, tol), radius_or_reason(&h.scale(-1.0), tol)),
        Err(e) => (json!({ "error": e.to_string() }), json!({ "error": e.to_string() })),
    };
    let plus = r_f.is_number() && r_fhat.is_number() && f0 <= 0.0 && fhat0 <= 0.0;
    let minus = r_f.is_number() && r_neg_fhat.is_number() && f0 >= 0.0 && fhat0 <= 0.0;
    json!({
        "stage": name,
        "f0": f0,
        "fhat0": fhat0,
        "r_f": r_f,
        "r_fhat": r_fhat,
        "r_minus_fhat": r_neg_fhat,
        "member_plus": plus,
        "member_minus": minus,
    })
}

pub fn cmd_transform(cfg: &RunConfig, pipeline: &Path, input: Option<&Path>, grid: usize, tol: f64) -> Result<i32> {
    positive("tol", tol)?;
    if grid < 2 {
        return Err(usage(format!("--grid must be at least 2, got {grid}")));
    }
    let mut p = Pipeline::parse(&read(pipeline)?)?;
    if let Some(path) = input {
        p.base = parse_spec(&read(path)?)?;
    }
    let steps = p.run()?;
    let names: Vec<String> =
        std::iter::once("base".to_string()).chain(p.stages.iter().map(|s| s.op.clone())).collect();
    let reports: Vec<Value> = names.iter().zip(&steps).map(|(n, f)| stage_report(n, f, tol)).collect();
    for r in &reports {
        println!(
            "{:<20} f(0) = {:+.6e}  fhat(0) = {:+.6e}  r(f) = {}  r(fhat) = {}",
            r["stage"].as_str().unwrap_or(""),
            r["f0"].as_f64().unwrap_or(f64::NAN),
            r["fhat0"].as_f64().unwrap_or(f64::NAN),
            r["r_f"],
            r["r_fhat"]
        );
    }
    let last = steps.last().expect("pipeline keeps its base");
    let hat = fourier_transform(last)?;
    let mut csv = String::from("x,f(x),fhat(x)\n");
    for i in 0..grid {
        let x = 4.0 * i as f64 / (grid - 1) as f64;
        csv.push_str(&format!("{x},{:e},{:e}\n", last.value(x), hat.value(x)));
    }
    let stem = pipeline.file_stem().and_then(|s| s.to_str()).unwrap_or("pipeline");
    write_atomic(&cfg.out.join(format!("transform-{stem}.csv")), &csv)?;
    let report = json!({ "function": to_value(last), "stages": reports });
    write_atomic(&cfg.out.join(format!("transform-{stem}.json")), &serde_json::to_string_pretty(&report).unwrap_or_default())?;
    Ok(EXIT_OK)
}
