//! `bpd` command-line front end.
//!
//! Exit codes: 0 success, 1 a failed check or cell, 2 a usage error or an
//! invalid parameter.

mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use config::{parse_power, PowerValue, RunConfig};

use crate::error::Error;
use crate::model::{
    classify_region, nu_interval, power_of_nu, successive_rates, ChannelModel, DistortionPair,
    SourceModel,
};
use crate::output;
use crate::schemes::{min_power, ProblemInstance, SchemeKind, SolverOptions};
use crate::sweeps::{distortion_region_at_power, ratio_map, Comparison, GridSpec};
use crate::verify::{run_suite, Suite, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const WORKERS_ENV: &str = "BPD_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "bpd", version, about = "Power-distortion tradeoffs for broadcasting correlated Gaussian sources")]
struct Cli {
    /// JSON file whose keys mirror the long flags; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for sweeps (0 = all cores). Overrides BPD_WORKERS.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// json, table or csv; the default depends on the command.
    #[arg(long, global = true)]
    format: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimum power of each scheme at one distortion pair.
    MinPower(MinPowerArgs),
    /// Successive-coding rates across the admissible nu interval.
    Rates(RatesArgs),
    /// Power-ratio map over a (d1, d2) grid, as CSV.
    RatioMap(RatioMapArgs),
    /// Distortion regions reachable at a fixed power, as CSV.
    Region(RegionArgs),
    /// Run numeric verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct SourceArgs {
    #[arg(long, allow_negative_numbers = true)]
    rho: Option<f64>,
}

#[derive(Debug, Args)]
struct ChannelArgs {
    #[arg(long, allow_negative_numbers = true)]
    n1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    n2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    kappa: Option<f64>,
}

#[derive(Debug, Args)]
struct DistortionArgs {
    #[arg(long, allow_negative_numbers = true)]
    d1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    d2: Option<f64>,
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Seed grid size over nu.
    #[arg(long)]
    nu_grid: Option<usize>,
    /// Seed grid size over the private power fraction (Scheme B).
    #[arg(long)]
    eta_grid: Option<usize>,
    #[arg(long)]
    nu_rel_tol: Option<f64>,
    #[arg(long)]
    power_rel_tol: Option<f64>,
}

#[derive(Debug, Args)]
struct MinPowerArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    d: DistortionArgs,
    /// A scheme name or `all`.
    #[arg(long)]
    scheme: Option<String>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug, Args)]
struct RatesArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    d: DistortionArgs,
    /// A single nu instead of a sweep.
    #[arg(long, allow_negative_numbers = true)]
    nu: Option<f64>,
    /// Number of nu values across the interval (default 11).
    #[arg(long)]
    nu_points: Option<usize>,
}

#[derive(Debug, Args)]
struct RatioMapArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    channel: ChannelArgs,
    /// lo:hi:n[:lin|:log]
    #[arg(long)]
    d1_grid: Option<String>,
    /// lo:hi:n[:lin|:log]
    #[arg(long)]
    d2_grid: Option<String>,
    /// sep-vs-outer (default) or c-vs-sep.
    #[arg(long)]
    compare: Option<String>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug, Args)]
struct RegionArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    channel: ChannelArgs,
    /// Linear power or decibels such as 3dB.
    #[arg(long, allow_negative_numbers = true)]
    power: Option<String>,
    /// Comma-separated scheme names (default: all five).
    #[arg(long)]
    schemes: Option<String>,
    /// Private power fractions per curve (default 512).
    #[arg(long)]
    points: Option<usize>,
    /// nu values per power split for separate coding (default 512).
    #[arg(long)]
    nu_points: Option<usize>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// all, lemma1, lemma2, appendix, thm1, thm2, thm3, ordering or oracle.
    #[arg(long)]
    suite: Option<String>,
    /// Seed for the randomized suites.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Model(Error),
    Io(io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Table,
    Csv,
}

/// Merged view of the global flags and the config file.
struct Ctx {
    cfg: RunConfig,
    workers: Option<usize>,
    out: Option<PathBuf>,
    format: Option<String>,
}

fn required<T>(flag: Option<T>, file: Option<T>, name: &str) -> CliResult<T> {
    flag.or(file)
        .ok_or_else(|| CliError::Usage(format!("missing required --{name}")))
}

impl Ctx {
    fn format(&self, default: Format, allowed: &[Format]) -> CliResult<Format> {
        let f = match self.format.as_deref().or(self.cfg.format.as_deref()) {
            None => default,
            Some("json") => Format::Json,
            Some("table") => Format::Table,
            Some("csv") => Format::Csv,
            Some(other) => return Err(CliError::Usage(format!("unknown format {other:?}; expected json, table or csv"))),
        };
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(CliError::Usage(format!("format {f:?} is not available for this command").to_lowercase()))
        }
    }

    fn sink(&self) -> CliResult<Box<dyn Write>> {
        Ok(match self.out.as_ref().or(self.cfg.out.as_ref()) {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn source(&self, a: &SourceArgs) -> CliResult<SourceModel> {
        Ok(SourceModel::new(required(a.rho, self.cfg.rho, "rho")?)?)
    }

    fn channel(&self, a: &ChannelArgs) -> CliResult<ChannelModel> {
        Ok(ChannelModel::new(
            required(a.n1, self.cfg.n1, "n1")?,
            required(a.n2, self.cfg.n2, "n2")?,
            required(a.kappa, self.cfg.kappa, "kappa")?,
        )?)
    }

    fn distortions(&self, a: &DistortionArgs) -> CliResult<DistortionPair> {
        Ok(DistortionPair::new(
            required(a.d1, self.cfg.d1, "d1")?,
            required(a.d2, self.cfg.d2, "d2")?,
        )?)
    }

    fn solver(&self, a: &SolverArgs) -> CliResult<SolverOptions> {
        let def = SolverOptions::default();
        let opts = SolverOptions {
            nu_grid: a.nu_grid.or(self.cfg.nu_grid).unwrap_or(def.nu_grid),
            eta_grid: a.eta_grid.or(self.cfg.eta_grid).unwrap_or(def.eta_grid),
            nu_rel_tol: a.nu_rel_tol.or(self.cfg.nu_rel_tol).unwrap_or(def.nu_rel_tol),
            power_rel_tol: a.power_rel_tol.or(self.cfg.power_rel_tol).unwrap_or(def.power_rel_tol),
        };
        if opts.nu_grid < 2 || opts.eta_grid < 2 || opts.nu_grid > 1 << 24 || opts.eta_grid > 1 << 24 {
            return Err(CliError::Usage("--nu-grid and --eta-grid must lie in [2, 2^24]".into()));
        }
        for (name, t) in [("nu-rel-tol", opts.nu_rel_tol), ("power-rel-tol", opts.power_rel_tol)] {
            if !(t > 0.0 && t <= 1e-2) {
                return Err(CliError::Usage(format!("--{name} must lie in (0, 0.01], got {t}")));
            }
        }
        Ok(opts)
    }
}

fn workers_from_env() -> CliResult<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{WORKERS_ENV}={v:?} is not a non-negative integer"))),
        _ => Ok(None),
    }
}

fn parse_grid(flag: &Option<String>, file: &Option<String>, name: &str) -> CliResult<GridSpec> {
    let s = required(flag.as_ref(), file.as_ref(), name)?;
    s.parse::<GridSpec>().map_err(|e| CliError::Usage(format!("--{name}: {e}")))
}

fn parse_schemes(list: Option<&str>) -> CliResult<Vec<SchemeKind>> {
    let Some(list) = list.filter(|s| s.trim() != "all") else {
        return Ok(SchemeKind::ALL.to_vec());
    };
    let mut picked = Vec::new();
    for name in list.split(',') {
        let k = SchemeKind::parse(name)
            .ok_or_else(|| CliError::Usage(format!("unknown scheme {name:?}; expected outer, separate, scheme-a, scheme-b, scheme-c or all")))?;
        picked.push(k);
    }
    Ok(SchemeKind::ALL.into_iter().filter(|k| picked.contains(k)).collect())
}

fn opt_num(x: Option<f64>) -> String {
    x.map(|v| format!("{v}")).unwrap_or_default()
}

#[derive(Serialize)]
struct MinPowerRow {
    scheme: SchemeKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    power: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimizer: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta_bar: Option<f64>,
    region: &'static str,
    degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct MinPowerDoc {
    instance: ProblemInstance,
    region: &'static str,
    results: Vec<MinPowerRow>,
}

fn cmd_min_power(ctx: &Ctx, a: &MinPowerArgs) -> CliResult<i32> {
    let inst = ProblemInstance::new(ctx.source(&a.source)?, ctx.channel(&a.channel)?, ctx.distortions(&a.d)?);
    let schemes = parse_schemes(a.scheme.as_deref().or(ctx.cfg.scheme.as_deref()))?;
    let opts = ctx.solver(&a.solver)?;
    let format = ctx.format(Format::Json, &[Format::Json, Format::Table, Format::Csv])?;
    let region = classify_region(&inst.source, &inst.d).label();

    let rows: Vec<MinPowerRow> = schemes
        .iter()
        .map(|&scheme| match min_power(&inst, scheme, &opts) {
            Ok(s) => MinPowerRow {
                scheme,
                power: Some(s.power),
                optimizer: s.optimizer,
                eta_bar: Some(s.eta_bar),
                region,
                degenerate: s.degenerate,
                error: None,
            },
            Err(e) => MinPowerRow {
                scheme,
                power: None,
                optimizer: None,
                eta_bar: None,
                region,
                degenerate: false,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let failed = rows.iter().any(|r| r.error.is_some());

    let mut w = ctx.sink()?;
    match format {
        Format::Json => output::write_json(&MinPowerDoc { instance: inst, region, results: rows }, &mut w)?,
        Format::Table | Format::Csv => {
            let header = ["scheme", "power", "optimizer", "eta_bar", "region", "degenerate", "error"];
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.scheme.name().to_string(),
                        opt_num(r.power),
                        opt_num(r.optimizer),
                        opt_num(r.eta_bar),
                        r.region.to_string(),
                        r.degenerate.to_string(),
                        r.error.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            if format == Format::Table {
                output::write_table(&header, &cells, &mut w)?;
            } else {
                writeln!(w, "{}", header.join(","))?;
                for row in cells {
                    writeln!(w, "{}", row.join(",").replace('\n', " "))?;
                }
                w.flush()?;
            }
        }
    }
    Ok(if failed { EXIT_FAILURE } else { EXIT_OK })
}

#[derive(Serialize)]
struct RatesRow {
    nu: f64,
    r1: f64,
    r2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    power: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta_bar: Option<f64>,
}

fn cmd_rates(ctx: &Ctx, a: &RatesArgs) -> CliResult<i32> {
    let source = ctx.source(&a.source)?;
    let d = ctx.distortions(&a.d)?;
    let has_channel = a.channel.n1.or(ctx.cfg.n1).is_some()
        || a.channel.n2.or(ctx.cfg.n2).is_some()
        || a.channel.kappa.or(ctx.cfg.kappa).is_some();
    let channel = if has_channel { Some(ctx.channel(&a.channel)?) } else { None };
    let format = ctx.format(Format::Csv, &[Format::Json, Format::Table, Format::Csv])?;

    let nus: Vec<f64> = match a.nu.or(ctx.cfg.nu) {
        Some(nu) => vec![nu],
        None => {
            let interval = nu_interval(&source, &d)?;
            let n = a.nu_points.or(ctx.cfg.nu_points).unwrap_or(11);
            if n == 0 {
                return Err(CliError::Usage("--nu-points must be positive".into()));
            }
            if interval.is_point() || n == 1 {
                vec![interval.lo]
            } else {
                GridSpec::linear(interval.lo, interval.hi, n)?.values()
            }
        }
    };
    let mut rows = Vec::with_capacity(nus.len());
    for nu in nus {
        let r = successive_rates(&source, &d, nu)?;
        let split = match &channel {
            Some(ch) => Some(power_of_nu(&source, ch, &d, nu)?),
            None => None,
        };
        rows.push(RatesRow {
            nu,
            r1: r.r1,
            r2: r.r2,
            power: split.map(|s| s.power),
            eta_bar: split.map(|s| s.eta_bar),
        });
    }

    let mut w = ctx.sink()?;
    if format == Format::Json {
        output::write_json(&rows, &mut w)?;
        return Ok(EXIT_OK);
    }
    let mut header = vec!["nu", "r1", "r2"];
    if channel.is_some() {
        header.extend(["power", "eta_bar"]);
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![format!("{}", r.nu), format!("{}", r.r1), format!("{}", r.r2)];
            if channel.is_some() {
                v.push(opt_num(r.power));
                v.push(opt_num(r.eta_bar));
            }
            v
        })
        .collect();
    if format == Format::Table {
        output::write_table(&header, &cells, &mut w)?;
    } else {
        writeln!(w, "{}", header.join(","))?;
        for row in cells {
            writeln!(w, "{}", row.join(","))?;
        }
        w.flush()?;
    }
    Ok(EXIT_OK)
}

fn cmd_ratio_map(ctx: &Ctx, a: &RatioMapArgs) -> CliResult<i32> {
    let source = ctx.source(&a.source)?;
    let channel = ctx.channel(&a.channel)?;
    let g1 = parse_grid(&a.d1_grid, &ctx.cfg.d1_grid, "d1-grid")?;
    let g2 = parse_grid(&a.d2_grid, &ctx.cfg.d2_grid, "d2-grid")?;
    let compare = match a.compare.as_deref().or(ctx.cfg.compare.as_deref()) {
        None => Comparison::SepVsOuter,
        Some(s) => Comparison::parse(s)
            .ok_or_else(|| CliError::Usage(format!("unknown comparison {s:?}; expected sep-vs-outer or c-vs-sep")))?,
    };
    let opts = ctx.solver(&a.solver)?;
    let format = ctx.format(Format::Csv, &[Format::Csv, Format::Json])?;
    let map = ratio_map(&source, &channel, &g1, &g2, compare, &opts, ctx.workers).map_err(|e| match e {
        Error::InvalidGrid(msg) => CliError::Usage(format!("invalid grid: {msg}")),
        other => CliError::Model(other),
    })?;

    let mut w = ctx.sink()?;
    match format {
        Format::Json => output::write_ratio_json(&map, &mut w)?,
        _ => output::write_ratio_csv(&map, &mut w)?,
    }
    let failed = map.failed();
    if failed > 0 {
        for e in map.entries.iter().filter(|e| e.cell.is_err()) {
            if let Err(err) = &e.cell {
                eprintln!("bpd: cell (d1={}, d2={}) failed: {err}", e.d1, e.d2);
            }
        }
        return Ok(EXIT_FAILURE);
    }
    Ok(EXIT_OK)
}

fn cmd_region(ctx: &Ctx, a: &RegionArgs) -> CliResult<i32> {
    let source = ctx.source(&a.source)?;
    let channel = ctx.channel(&a.channel)?;
    let power = match (&a.power, &ctx.cfg.power) {
        (Some(s), _) | (None, Some(PowerValue::Text(s))) => parse_power(s).map_err(CliError::Usage)?,
        (None, Some(PowerValue::Linear(x))) => parse_power(&x.to_string()).map_err(CliError::Usage)?,
        (None, None) => return Err(CliError::Usage("missing required --power".into())),
    };
    let schemes = parse_schemes(a.schemes.as_deref().or(ctx.cfg.schemes.as_deref()))?;
    let points = a.points.or(ctx.cfg.points).unwrap_or(512);
    let nu_points = a.nu_points.or(ctx.cfg.nu_points).unwrap_or(512);
    if !(2..=1_000_000).contains(&points) || !(2..=1_000_000).contains(&nu_points) {
        return Err(CliError::Usage("--points and --nu-points must lie in [2, 10^6]".into()));
    }
    let format = ctx.format(Format::Csv, &[Format::Csv, Format::Json])?;
    let curves = schemes
        .iter()
        .map(|&k| distortion_region_at_power(&source, &channel, power, k, points, nu_points))
        .collect::<Result<Vec<_>, _>>()?;

    let mut w = ctx.sink()?;
    match format {
        Format::Json => output::write_json(&curves, &mut w)?,
        _ => output::write_region_csv(&curves, &mut w)?,
    }
    Ok(EXIT_OK)
}

fn cmd_verify(ctx: &Ctx, a: &VerifyArgs) -> CliResult<i32> {
    let suite: Suite = a
        .suite
        .as_deref()
        .or(ctx.cfg.suite.as_deref())
        .unwrap_or("all")
        .parse()
        .map_err(CliError::Usage)?;
    let opts = VerifyOptions {
        seed: a.seed.or(ctx.cfg.seed).unwrap_or(VerifyOptions::default().seed),
        workers: ctx.workers,
        solver: ctx.solver(&a.solver)?,
    };
    let format = ctx.format(Format::Table, &[Format::Table, Format::Json])?;
    let reports = run_suite(suite, &opts)?;
    let mut w = ctx.sink()?;
    match format {
        Format::Json => output::write_json(&reports, &mut w)?,
        _ => output::write_reports(&reports, &mut w)?,
    }
    Ok(if reports.iter().all(|r| r.passed) { EXIT_OK } else { EXIT_FAILURE })
}

fn dispatch(cli: Cli) -> CliResult<i32> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path).map_err(CliError::Usage)?,
        None => RunConfig::default(),
    };
    let workers = match cli.workers {
        Some(n) => Some(n),
        None => workers_from_env()?.or(cfg.workers),
    };
    let ctx = Ctx {
        cfg,
        workers,
        out: cli.out,
        format: cli.format,
    };
    match &cli.command {
        Command::MinPower(a) => cmd_min_power(&ctx, a),
        Command::Rates(a) => cmd_rates(&ctx, a),
        Command::RatioMap(a) => cmd_ratio_map(&ctx, a),
        Command::Region(a) => cmd_region(&ctx, a),
        Command::Verify(a) => cmd_verify(&ctx, a),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("bpd: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Model(e)) => {
            eprintln!("bpd: {e}");
            match e {
                Error::InvalidParameter { .. }
                | Error::InvalidGrid(_)
                | Error::OutOfRange { .. }
                | Error::InfeasibleNu { .. }
                | Error::TrivialRegion
                | Error::NonTrivialRegion => EXIT_USAGE,
                _ => EXIT_FAILURE,
            }
        }
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(CliError::Io(e)) => {
            eprintln!("bpd: {e}");
            EXIT_FAILURE
        }
    }
}
