//! Command-line front end. Every command writes CSV (or the suite report)
//! to `--output` or standard output.
//!
//! Exit codes: 0 success, 1 a validation check failed, 2 usage error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use randflight_core::density::{g_exact, g_tilde, radial_profile, switch_tail_error};
use randflight_core::montecarlo::{radial_histogram, sample_paths};
use randflight_core::{FlightParams, McConfig, SeriesTruncation};
use serde::Serialize;

use crate::parallel::RayonRunner;
use crate::suite::{run_suite, write_csv, write_text, SuiteOptions, DEFAULT_TIMES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Intensities plotted when `gcurves` gets no `--lambda`.
pub const GCURVE_LAMBDAS: [f64; 4] = [1.0, 1.5, 2.0, 2.5];

#[derive(Debug, Parser)]
#[command(name = "randflight", version, about = "Small-time analysis of the 3-D Markov random flight")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Print the resolved run specification as JSON to standard error.
    #[arg(long, global = true)]
    pub verbose: bool,

    /// Worker threads for Monte Carlo (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Absolutely continuous density on a radial grid.
    DensityProfile(ProfileArgs),
    /// Exact and approximate mass of the absolutely continuous part.
    Gcurves(GcurveArgs),
    /// Simulated radial histogram or raw endpoints.
    Simulate(SimulateArgs),
    /// Run the validation suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long, default_value_t = 5.0)]
    pub c: f64,
    #[arg(long, default_value_t = 2.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.1)]
    pub t: f64,
    /// Largest radius; defaults to ct(1 − 1e−8).
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long, default_value_t = 500)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct GcurveArgs {
    /// Single intensity; all of 1, 1.5, 2, 2.5 when absent.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub tmin: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tmax: f64,
    /// Rows per intensity over (tmin, tmax].
    #[arg(long, default_value_t = 200)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 5.0)]
    pub c: f64,
    #[arg(long, default_value_t = 2.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.1)]
    pub t: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    /// Emit every endpoint instead of the histogram.
    #[arg(long)]
    pub raw: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Text,
    Csv,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, default_value_t = 5.0)]
    pub c: f64,
    #[arg(long, default_value_t = 2.0)]
    pub lambda: f64,
    /// Time points (repeatable); 0.05, 0.1 and 0.2 when absent.
    #[arg(long = "t")]
    pub t: Vec<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    /// Series term budget.
    #[arg(long, default_value_t = SeriesTruncation::DEFAULT_MAX_TERMS)]
    pub terms: usize,
    /// Quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Skip the Monte Carlo checks.
    #[arg(long)]
    pub quick: bool,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

/// Fully resolved parameters of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSpec {
    pub command: &'static str,
    pub c: Option<f64>,
    pub lambda: Vec<f64>,
    pub t: Vec<f64>,
    pub r_max: Option<f64>,
    pub samples: Option<u64>,
    pub seed: u64,
    pub terms: Option<usize>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    pub raw: bool,
    pub quick: bool,
    pub format: Option<ReportFormat>,
}

/// Failure that maps to an exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<randflight_core::Error> for CliError {
    fn from(e: randflight_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl RunSpec {
    fn base(cli: &Cli, command: &'static str) -> Self {
        RunSpec {
            command,
            c: None,
            lambda: Vec::new(),
            t: Vec::new(),
            r_max: None,
            samples: None,
            seed: cli.seed,
            terms: None,
            grid: None,
            tol: None,
            output: cli.output.clone(),
            threads: cli.threads,
            raw: false,
            quick: false,
            format: None,
        }
    }
}

/// Checks every argument against the model before anything runs.
pub fn resolve(cli: &Cli) -> Result<RunSpec, CliError> {
    if cli.threads == Some(0) {
        return Err(usage("--threads must be at least 1"));
    }
    let spec = match &cli.command {
        Command::DensityProfile(a) => {
            let p = FlightParams::new(a.c, a.lambda)?;
            check_time(a.t)?;
            let ct = p.radius(a.t);
            let r_max = a.rmax.unwrap_or(ct * (1.0 - 1e-8));
            if !(r_max > 0.0 && r_max < ct) {
                return Err(usage(format!("--rmax must lie in (0, ct) = (0, {ct})")));
            }
            if a.points < 2 {
                return Err(usage("--points must be at least 2"));
            }
            RunSpec {
                c: Some(a.c),
                lambda: vec![a.lambda],
                t: vec![a.t],
                r_max: Some(r_max),
                grid: Some(a.points),
                ..RunSpec::base(cli, "density-profile")
            }
        }
        Command::Gcurves(a) => {
            let lambdas = match a.lambda {
                Some(l) => vec![l],
                None => GCURVE_LAMBDAS.to_vec(),
            };
            for &l in &lambdas {
                FlightParams::new(1.0, l)?;
            }
            if !(a.tmin >= 0.0 && a.tmax > a.tmin && a.tmax.is_finite()) {
                return Err(usage("need 0 <= --tmin < --tmax"));
            }
            if a.points < 1 {
                return Err(usage("--points must be at least 1"));
            }
            RunSpec {
                lambda: lambdas,
                t: vec![a.tmin, a.tmax],
                grid: Some(a.points),
                ..RunSpec::base(cli, "gcurves")
            }
        }
        Command::Simulate(a) => {
            FlightParams::new(a.c, a.lambda)?;
            check_time(a.t)?;
            if a.samples < 1 {
                return Err(usage("--samples must be at least 1"));
            }
            if a.bins < 1 {
                return Err(usage("--bins must be at least 1"));
            }
            RunSpec {
                c: Some(a.c),
                lambda: vec![a.lambda],
                t: vec![a.t],
                samples: Some(a.samples),
                grid: Some(a.bins),
                raw: a.raw,
                ..RunSpec::base(cli, "simulate")
            }
        }
        Command::Validate(a) => {
            FlightParams::new(a.c, a.lambda)?;
            let times = if a.t.is_empty() {
                DEFAULT_TIMES.to_vec()
            } else {
                a.t.clone()
            };
            for &t in &times {
                check_time(t)?;
            }
            SeriesTruncation::new(a.terms, SeriesTruncation::DEFAULT_TAIL_TOL)?;
            if !(a.tol > 0.0 && a.tol.is_finite()) {
                return Err(usage("--tol must be positive and finite"));
            }
            if !a.quick && a.samples < randflight_core::montecarlo::MIN_CF_SAMPLES {
                return Err(usage("--samples must be at least 10000"));
            }
            RunSpec {
                c: Some(a.c),
                lambda: vec![a.lambda],
                t: times,
                samples: Some(a.samples),
                terms: Some(a.terms),
                tol: Some(a.tol),
                quick: a.quick,
                format: Some(a.format),
                ..RunSpec::base(cli, "validate")
            }
        }
    };
    Ok(spec)
}

fn check_time(t: f64) -> Result<(), CliError> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("time must be positive, got {t}")))
    }
}

fn runner(spec: &RunSpec) -> Result<RayonRunner, CliError> {
    match spec.threads {
        Some(n) => RayonRunner::with_threads(n).map_err(|e| usage(e.to_string())),
        None => Ok(RayonRunner::global()),
    }
}

/// Runs a resolved command, writing its output to `out`. Returns the exit
/// code.
pub fn execute<W: Write>(spec: &RunSpec, out: W) -> Result<i32, CliError> {
    let mut out = BufWriter::new(out);
    let code = match spec.command {
        "density-profile" => {
            let p = FlightParams::new(spec.c.unwrap_or(5.0), spec.lambda[0])?;
            let prof = radial_profile(spec.t[0], &p, spec.grid.unwrap_or(500), spec.r_max.unwrap_or(0.0))?;
            writeln!(out, "r,ac_density")?;
            for (r, v) in prof.radii.iter().zip(&prof.values) {
                writeln!(out, "{r:.16e},{v:.16e}")?;
            }
            EXIT_OK
        }
        "gcurves" => {
            let (tmin, tmax) = (spec.t[0], spec.t[1]);
            let n = spec.grid.unwrap_or(200);
            writeln!(out, "lambda,t,g_exact,g_tilde,gap")?;
            for &lambda in &spec.lambda {
                let p = FlightParams::new(1.0, lambda)?;
                for i in 1..=n {
                    let t = tmin + (tmax - tmin) * i as f64 / n as f64;
                    let (g, gt, gap) = (g_exact(t, &p)?, g_tilde(t, &p)?, switch_tail_error(t, &p)?);
                    writeln!(out, "{lambda:.16e},{t:.16e},{g:.16e},{gt:.16e},{gap:.16e}")?;
                }
            }
            EXIT_OK
        }
        "simulate" => {
            let p = FlightParams::new(spec.c.unwrap_or(5.0), spec.lambda[0])?;
            let t = spec.t[0];
            let cfg = McConfig::with_seed(spec.samples.unwrap_or(1), spec.seed)?;
            let runner = runner(spec)?;
            if spec.raw {
                writeln!(out, "x1,x2,x3,n_switches")?;
                for s in sample_paths(t, &p, &cfg, &runner)? {
                    let x = s.position;
                    writeln!(out, "{:.16e},{:.16e},{:.16e},{}", x.x1, x.x2, x.x3, s.n_switches)?;
                }
            } else {
                let h = radial_histogram(t, &p, &cfg, spec.grid.unwrap_or(50), None, &runner)?;
                writeln!(out, "r_lo,r_hi,mass")?;
                for (i, m) in h.mass.iter().enumerate() {
                    writeln!(out, "{:.16e},{:.16e},{m:.16e}", h.edges[i], h.edges[i + 1])?;
                }
                writeln!(out, "atom,{:.16e}", h.atom)?;
            }
            EXIT_OK
        }
        "validate" => {
            let p = FlightParams::new(spec.c.unwrap_or(5.0), spec.lambda[0])?;
            let opts = SuiteOptions {
                samples: spec.samples.unwrap_or(1_000_000),
                seed: spec.seed,
                quick: spec.quick,
                trunc: SeriesTruncation::new(
                    spec.terms.unwrap_or(SeriesTruncation::DEFAULT_MAX_TERMS),
                    SeriesTruncation::DEFAULT_TAIL_TOL,
                )?,
                quad_tol: spec.tol.unwrap_or(1e-10),
            };
            let reports = run_suite(&p, &spec.t, &opts, &runner(spec)?);
            match spec.format {
                Some(ReportFormat::Csv) => write_csv(&reports, &mut out)?,
                _ => write_text(&reports, &mut out)?,
            }
            if reports.iter().all(|r| r.passed) {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        other => return Err(usage(format!("unknown command {other}"))),
    };
    out.flush()?;
    Ok(code)
}

/// Resolves, logs and executes a parsed command line. Errors are reported
/// on standard error.
pub fn run(cli: &Cli) -> i32 {
    let result = resolve(cli).and_then(|spec| {
        if cli.verbose {
            let json = serde_json::to_string_pretty(&spec).map_err(io::Error::other)?;
            eprintln!("{json}");
        }
        match &spec.output {
            Some(path) => execute(&spec, File::create(path)?),
            None => execute(&spec, io::stdout().lock()),
        }
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("randflight: {e}");
            match e {
                CliError::Usage(_) => EXIT_USAGE,
                CliError::Io(_) => EXIT_CHECK_FAILED,
            }
        }
    }
}
