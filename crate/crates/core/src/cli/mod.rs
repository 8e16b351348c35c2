//! `secant-dyn` command line: render, orbit, focal, parity and verify.
//!
//! Every numeric parameter may come from a flag or from a flat
//! `key = value` file given with `--config`; flags win.

pub mod config;
pub mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::basin::{parity_experiment, render_basin_with_threads, write_image, ParityOptions, Window};
use crate::extrapolate::Schedule;
use crate::focal::{focal_points, landing_sweep, FocalKind};
use crate::poly::{parse_factored, Factor, Polynomial};
use crate::secmap::{iterate_orbit, OrbitLimits, PlanePoint};

pub use config::Config;

/// Environment variable capping the number of rendering workers.
pub const THREADS_ENV: &str = "SECANT_DYN_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
    #[error("{0} verify suite(s) failed")]
    VerifyFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Runtime(_) => EXIT_RUNTIME,
            CliError::VerifyFailed(_) => EXIT_VERIFY,
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Runtime(format!("cannot write {}: {e}", path.display()))
}

#[derive(Debug, Parser)]
#[command(
    name = "secant-dyn",
    version,
    about = "Dynamics of the secant map for polynomials with multiple roots"
)]
pub struct Cli {
    /// Flat `key = value` file supplying defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify every cell of a window and write a PPM or PNG image.
    Render(RenderArgs),
    /// Iterate one seed and write its trace as CSV.
    Orbit(OrbitArgs),
    /// List focal points and sweep the curvature landing map.
    Focal(FocalArgs),
    /// Sample seeds around a multiple root and count their fates.
    Parity(ParityArgs),
    /// Run the identity suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args, Default)]
pub struct PolyArgs {
    /// Coefficients a0 a1 ... ak of a monic polynomial.
    #[arg(long, allow_hyphen_values = true, value_name = "\"a0 a1 ...\"")]
    pub coeffs: Option<String>,
    /// Factored form, e.g. "(-2 1)(0 1)(1 2) [residual coeffs]".
    #[arg(long, allow_hyphen_values = true, value_name = "\"(alpha d)...\"")]
    pub factored: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct LimitArgs {
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub conv_tol: Option<f64>,
    #[arg(long)]
    pub conv_streak: Option<usize>,
    #[arg(long)]
    pub escape_radius: Option<f64>,
    #[arg(long)]
    pub pole_guard: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct ScheduleArgs {
    /// First step of the geometric schedule t_j = t0 * ratio^j.
    #[arg(long)]
    pub t0: Option<f64>,
    #[arg(long)]
    pub ratio: Option<f64>,
    #[arg(long)]
    pub levels: Option<usize>,
    /// Extrapolation order.
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    #[arg(long, num_args = 4, allow_negative_numbers = true, value_names = ["X_MIN", "X_MAX", "Y_MIN", "Y_MAX"])]
    pub window: Option<Vec<f64>>,
    #[arg(long, num_args = 2, value_names = ["WIDTH", "HEIGHT"])]
    pub size: Option<Vec<usize>>,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Worker threads (capped by SECANT_DYN_THREADS).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output image; `.png` selects PNG, anything else PPM.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["X", "Y"])]
    pub seed: Option<Vec<f64>>,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// CSV output; standard output when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FocalArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Root of even multiplicity to sweep; defaults to the first one.
    #[arg(long, allow_negative_numbers = true)]
    pub root: Option<f64>,
    /// Curvatures for the sweep, whitespace separated.
    #[arg(long, allow_hyphen_values = true)]
    pub kappas: Option<String>,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    /// Sweep CSV output; printed after the table when absent.
    #[arg(long)]
    pub sweep_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ParityArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Multiple root to study; defaults to the first one.
    #[arg(long, allow_negative_numbers = true)]
    pub root: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, short)]
    pub n: Option<usize>,
    #[arg(long)]
    pub rng_seed: Option<u64>,
    /// Sample only the quadrant x >= α, y >= α.
    #[arg(long)]
    pub quadrant: bool,
    /// Skip the witness search for even multiplicity.
    #[arg(long)]
    pub no_witnesses: bool,
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Counts CSV; standard output when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Witness CSV; printed after the counts when absent.
    #[arg(long)]
    pub witness_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run the identity suites on this polynomial instead of the built-in library.
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Roots claimed for `--coeffs`, e.g. "(1 2)(-2 1)"; checked by root_validation.
    #[arg(long, allow_hyphen_values = true)]
    pub claim: Option<String>,
    #[arg(long)]
    pub rng_seed: Option<u64>,
    /// Random polynomials in the divided-difference suite.
    #[arg(long)]
    pub trials: Option<usize>,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    match &cli.command {
        Command::Render(a) => cmd_render(a, &cfg, out),
        Command::Orbit(a) => cmd_orbit(a, &cfg, out),
        Command::Focal(a) => cmd_focal(a, &cfg, out),
        Command::Parity(a) => cmd_parity(a, &cfg, out),
        Command::Verify(a) => cmd_verify(a, &cfg, out),
    }
}

fn polynomial(a: &PolyArgs, cfg: &Config) -> Result<Polynomial, CliError> {
    let (coeffs, factored) = if a.coeffs.is_some() || a.factored.is_some() {
        (a.coeffs.clone(), a.factored.clone())
    } else {
        (
            cfg.raw("coeffs").map(String::from),
            cfg.raw("factored").map(String::from),
        )
    };
    let text = match (coeffs, factored) {
        (Some(c), None) => format!("coeffs: {c}"),
        (None, Some(f)) => format!("factored: {f}"),
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give either --coeffs or --factored, not both".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::Usage(
                "a polynomial is required (--coeffs or --factored)".into(),
            ))
        }
    };
    Polynomial::parse(&text).map_err(|e| CliError::Usage(format!("invalid polynomial: {e}")))
}

fn limits(a: &LimitArgs, cfg: &Config, base: OrbitLimits) -> Result<OrbitLimits, CliError> {
    let l = OrbitLimits {
        max_iter: cfg.pick(a.max_iter, "max_iter")?.unwrap_or(base.max_iter),
        conv_tol: cfg.pick(a.conv_tol, "conv_tol")?.unwrap_or(base.conv_tol),
        conv_streak: cfg
            .pick(a.conv_streak, "conv_streak")?
            .unwrap_or(base.conv_streak),
        escape_radius: cfg
            .pick(a.escape_radius, "escape_radius")?
            .unwrap_or(base.escape_radius),
        pole_guard: cfg.pick(a.pole_guard, "pole_guard")?.unwrap_or(base.pole_guard),
    };
    let positive = |v: f64| v > 0.0 && v.is_finite();
    if !positive(l.conv_tol)
        || !positive(l.escape_radius)
        || !(l.pole_guard >= 0.0 && l.pole_guard.is_finite())
    {
        return Err(CliError::Usage(
            "conv_tol and escape_radius must be positive, pole_guard non-negative".into(),
        ));
    }
    if l.conv_streak == 0 {
        return Err(CliError::Usage("conv_streak must be at least 1".into()));
    }
    Ok(l)
}

fn schedule(a: &ScheduleArgs, cfg: &Config) -> Result<Schedule, CliError> {
    let d = Schedule::default();
    let s = Schedule {
        t0: cfg.pick(a.t0, "t0")?.unwrap_or(d.t0),
        ratio: cfg.pick(a.ratio, "ratio")?.unwrap_or(d.ratio),
        levels: cfg.pick(a.levels, "levels")?.unwrap_or(d.levels),
        order: cfg.pick(a.order, "order")?.unwrap_or(d.order),
    };
    if !s.is_valid() {
        return Err(CliError::Usage(
            "schedule needs t0 > 0, 0 < ratio < 1, levels >= 2, order >= 1".into(),
        ));
    }
    Ok(s)
}

/// Requested workers (flag, config, or all cores), capped by `SECANT_DYN_THREADS`.
pub fn worker_count(requested: Option<usize>) -> Result<usize, CliError> {
    let base =
        requested.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    let cap =
        match std::env::var(THREADS_ENV) {
            Ok(v) => v.trim().parse::<usize>().ok().filter(|&n| n > 0).ok_or_else(|| {
                CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))
            })?,
            Err(_) => usize::MAX,
        };
    if base == 0 {
        return Err(CliError::Usage("threads must be positive".into()));
    }
    Ok(base.min(cap))
}

fn pick_root(
    p: &Polynomial,
    alpha: Option<f64>,
    want: &str,
    ok: impl Fn(usize) -> bool,
) -> Result<usize, CliError> {
    match alpha {
        Some(a) => {
            let i = p
                .roots()
                .iter()
                .position(|r| (r.alpha() - a).abs() <= 1e-9 * a.abs().max(1.0));
            let i = i.ok_or_else(|| CliError::Usage(format!("{a} is not a root of {p}")))?;
            if !ok(p.roots()[i].multiplicity()) {
                return Err(CliError::Usage(format!("root {a} is not {want}")));
            }
            Ok(i)
        }
        None => p
            .roots()
            .iter()
            .position(|r| ok(r.multiplicity()))
            .ok_or_else(|| CliError::Usage(format!("{p} has no {want} root"))),
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(path) => fs::write(path, text).map_err(|e| io_err(path, e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Runtime(format!("cannot write output: {e}"))),
    }
}

fn say(out: &mut dyn Write, line: impl AsRef<str>) -> Result<(), CliError> {
    writeln!(out, "{}", line.as_ref()).map_err(|e| CliError::Runtime(format!("cannot write output: {e}")))
}

pub fn cmd_render(a: &RenderArgs, cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let p = polynomial(&a.poly, cfg)?;
    let win = cfg
        .pick_list(a.window.clone(), "window", 4)?
        .unwrap_or_else(|| vec![-3.0, 3.0, -3.0, 3.0]);
    let size = cfg
        .pick_list(a.size.clone(), "size", 2)?
        .unwrap_or_else(|| vec![300, 300]);
    let w = Window::new(win[0], win[1], win[2], win[3], size[0], size[1])
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let lim = limits(&a.limits, cfg, OrbitLimits::basin())?;
    let threads = worker_count(cfg.pick(a.threads, "threads")?)?;
    let path = cfg
        .pick(a.out.clone(), "out")?
        .unwrap_or_else(|| PathBuf::from("basin.ppm"));

    let start = Instant::now();
    let grid =
        render_basin_with_threads(&p, &w, &lim, threads).map_err(|e| CliError::Runtime(e.to_string()))?;
    let elapsed = start.elapsed();
    write_image(&grid, &path).map_err(|e| CliError::Runtime(e.to_string()))?;

    let hist: Vec<String> = grid
        .histogram()
        .iter()
        .map(|(c, n)| match c.root() {
            Some(i) => format!("{c} (root {})={n}", p.roots()[i].alpha()),
            None => format!("{c}={n}"),
        })
        .collect();
    say(
        out,
        format!(
            "{}x{} cells, {} worker(s), {:.3} s: {}",
            w.width,
            w.height,
            threads,
            elapsed.as_secs_f64(),
            hist.join(", ")
        ),
    )?;
    say(out, format!("wrote {}", path.display()))
}

pub fn cmd_orbit(a: &OrbitArgs, cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let p = polynomial(&a.poly, cfg)?;
    let seed = cfg
        .pick_list(a.seed.clone(), "seed", 2)?
        .ok_or_else(|| CliError::Usage("a seed is required (--seed X Y)".into()))?;
    let seed = PlanePoint::new(seed[0], seed[1]);
    if !seed.is_finite() {
        return Err(CliError::Usage("seed must be finite".into()));
    }
    let lim = limits(&a.limits, cfg, OrbitLimits::default())?;
    let r = iterate_orbit(&p, seed, &lim, true);
    let mut csv = String::from("iter,x,y,classification\n");
    for (i, pt) in r.trace.iter().flatten().enumerate() {
        csv.push_str(&format!("{i},{:e},{:e},{}\n", pt.x, pt.y, r.classification));
    }
    let path = cfg.pick(a.out.clone(), "out")?;
    emit(&csv, path.as_deref(), out)?;
    if let Some(path) = path {
        say(
            out,
            format!(
                "{} after {} step(s); wrote {}",
                r.classification,
                r.iterations,
                path.display()
            ),
        )?;
    }
    Ok(())
}

pub fn cmd_focal(a: &FocalArgs, cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let p = polynomial(&a.poly, cfg)?;
    let sched = schedule(&a.schedule, cfg)?;
    let mut table = format!("focal points of {p}\n");
    table.push_str(&format!(
        "{:>14} {:>14}  {:<10} {:>18}\n",
        "x", "y", "kind", "prefocal line"
    ));
    for fp in focal_points(&p) {
        let kind = match fp.kind {
            FocalKind::Simple => "simple",
            FocalKind::NonSimple => "non-simple",
        };
        table.push_str(&format!(
            "{:>14} {:>14}  {:<10} {:>18}\n",
            fp.location.x,
            fp.location.y,
            kind,
            format!("x = {}", fp.prefocal_x)
        ));
    }
    emit(&table, None, out)?;

    let even = |d: usize| d >= 2 && d.is_multiple_of(2);
    let idx = match (
        cfg.pick(a.root, "root")?,
        p.roots().iter().any(|r| even(r.multiplicity())),
    ) {
        (None, false) => return say(out, "no root of even multiplicity; no curvature sweep"),
        (root, _) => pick_root(&p, root, "of even multiplicity", even)?,
    };
    let kappas: Vec<f64> = match a.kappas.as_deref().or(cfg.raw("kappas")) {
        Some(text) => text
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| CliError::Usage(format!("`{t}` is not a curvature")))
            })
            .collect::<Result<_, _>>()?,
        None => vec![-3.0, -0.5, 0.0, 1.0, 4.0],
    };
    let rows =
        landing_sweep(&p, &p.roots()[idx], &kappas, &sched).map_err(|e| CliError::Runtime(e.to_string()))?;
    let mut csv = String::from("kappa,y_closed_form,y_numeric,abs_error\n");
    for r in rows {
        csv.push_str(&format!(
            "{},{:e},{:e},{:e}\n",
            r.kappa, r.closed_form, r.numeric, r.abs_error
        ));
    }
    let path = cfg.pick(a.sweep_out.clone(), "sweep_out")?;
    emit(&csv, path.as_deref(), out)?;
    if let Some(path) = path {
        say(out, format!("wrote {}", path.display()))?;
    }
    Ok(())
}

pub fn cmd_parity(a: &ParityArgs, cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let p = polynomial(&a.poly, cfg)?;
    let idx = pick_root(&p, cfg.pick(a.root, "root")?, "multiple", |d| d >= 2)?;
    let eps = cfg.pick(a.eps, "eps")?.unwrap_or(1e-3);
    let n = cfg.pick(a.n, "n")?.unwrap_or(10_000);
    if !(eps > 0.0 && eps.is_finite()) || n == 0 {
        return Err(CliError::Usage("eps and n must be positive".into()));
    }
    let seed = cfg.pick(a.rng_seed, "rng_seed")?.unwrap_or(0);
    let opts = ParityOptions {
        limits: limits(&a.limits, cfg, OrbitLimits::default())?,
        quadrant_only: cfg.switch(a.quadrant, "quadrant")?,
        witnesses: !a.no_witnesses && cfg.get::<bool>("witnesses")?.unwrap_or(true),
    };
    let report =
        parity_experiment(&p, idx, eps, n, seed, &opts).map_err(|e| CliError::Runtime(e.to_string()))?;

    let counts_path = cfg.pick(a.out.clone(), "out")?;
    let witness_path = cfg.pick(a.witness_out.clone(), "witness_out")?;
    emit(&report.counts_csv(), counts_path.as_deref(), out)?;
    if report.multiplicity % 2 == 0 && opts.witnesses {
        if witness_path.is_none() {
            say(out, "")?;
        }
        emit(&report.witnesses_csv(), witness_path.as_deref(), out)?;
    }
    if counts_path.is_some() {
        say(
            out,
            format!(
                "root {} (d = {}): {:.2}% of {} seeds converge to it, {} witness(es)",
                report.alpha,
                report.multiplicity,
                100.0 * report.fraction_to_root(),
                n,
                report.witnesses.len()
            ),
        )?;
    }
    Ok(())
}

pub fn cmd_verify(a: &VerifyArgs, cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let seed = cfg.pick(a.rng_seed, "rng_seed")?.unwrap_or(0);
    let trials = cfg.pick(a.trials, "trials")?.unwrap_or(200);
    let claim_text = a.claim.as_deref().or(cfg.raw("claim"));
    let has_poly = a.poly.coeffs.is_some()
        || a.poly.factored.is_some()
        || cfg.raw("coeffs").is_some()
        || cfg.raw("factored").is_some();

    let mut claimed: Option<(Vec<f64>, Vec<Factor>)> = None;
    let target = match claim_text {
        Some(text) => {
            let coeffs_text = a
                .poly
                .coeffs
                .as_deref()
                .or(cfg.raw("coeffs"))
                .ok_or_else(|| CliError::Usage("--claim needs --coeffs".into()))?;
            let coeffs: Vec<f64> = coeffs_text
                .split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| CliError::Usage(format!("`{t}` is not a number")))
                })
                .collect::<Result<_, _>>()?;
            let (factors, residual) =
                parse_factored(text).map_err(|e| CliError::Usage(format!("invalid claim: {e}")))?;
            if !residual.is_empty() {
                return Err(CliError::Usage("a claim lists roots only".into()));
            }
            let target = Polynomial::with_roots(&coeffs, &factors).ok();
            claimed = Some((coeffs, factors));
            target
        }
        None if has_poly => Some(polynomial(&a.poly, cfg)?),
        None => None,
    };

    let results = verify::run_all(
        seed,
        trials,
        target.as_ref(),
        claimed.as_ref().map(|(c, f)| (c.as_slice(), f.as_slice())),
    );
    let mut failed = 0;
    for r in &results {
        say(out, r.line())?;
        failed += usize::from(!r.passed());
    }
    if failed > 0 {
        return Err(CliError::VerifyFailed(failed));
    }
    say(
        out,
        format!("all {} suites passed (rng_seed {seed})", results.len()),
    )
}
