//! Command-line front end: flag parsing, config merging and the task
//! runner. Every task writes one CSV table (comma separated, header row,
//! LF line endings, 17 significant digits) to `--out` or stdout.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::asymptotics::{
    asymptotic_cd, asymptotic_constants, asymptotic_cv, ratio_series, theorem1_check,
    DEFAULT_RATIO_GUARD,
};
use crate::config::{RunConfig, Task};
use crate::error::{Error, Result};
use crate::measures::{evaluate, measure_series, Direction, LagSpec, MeasureKind};
use crate::montecarlo::{
    estimate_alpha, estimate_alpha_auto, BlockBootstrap, PathSample, DEFAULT_ALPHA_WINDOW,
};
use crate::svg::{line_chart, Series};

pub const THREADS_ENV: &str = "STABLE_AR2_THREADS";

pub const DEFAULT_H_MAX: usize = 40;
pub const DEFAULT_SERIES_TOL: f64 = 1e-10;
pub const DEFAULT_THEOREM_TOL: f64 = 0.02;
pub const DEFAULT_SIMULATE_N: usize = 10_000;
pub const DEFAULT_ESTIMATE_N: usize = 100_000;

#[derive(Debug, Parser)]
#[command(
    name = "stable-ar2",
    version,
    about = "Cross-codifference and cross-covariation of a bivariate AR(1) with symmetric alpha-stable noise"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic CD or CV for h = 0..=hmax
    Measures(MeasuresArgs),
    /// Series values next to their leading-order predictions
    Asymptotics(SeriesArgs),
    /// r(-h)/alpha and r(h) for h = 0..=hmax
    Ratio(RatioArgs),
    /// Simulate a stationary path
    Simulate(SimulateArgs),
    /// Estimate alpha from the ratio of empirical CD to CV
    Estimate(EstimateArgs),
    /// Check the two ratio limits at hmax
    CheckTheorem1(TheoremArgs),
    /// Run the task named in the config file
    Run(Common),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON model/task file; the built-in Θ1 example is used when absent
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Overrides the stability index of the config
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Output CSV (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Cd,
    Cv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Minus,
    Plus,
}

#[derive(Debug, Clone, Args)]
pub struct MeasuresArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub hmax: Option<usize>,
    /// Absolute truncation tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    #[arg(long, value_enum)]
    pub direction: Option<DirectionArg>,
    /// Also plot the series to this SVG file
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub hmax: Option<usize>,
    /// Absolute truncation tolerance of the series column
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct RatioArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub hmax: Option<usize>,
    /// Relative guard: lags with |CV| below tol * max|CV| are left empty
    #[arg(long)]
    pub tol: Option<f64>,
    /// Also plot both ratio curves to this SVG file
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Two-column CSV path; a path is simulated from the model when absent
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Simulation and bootstrap seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Lag window as LO,HI
    #[arg(long, value_delimiter = ',')]
    pub window: Option<Vec<usize>>,
    /// FLOM exponent in (1, alpha); a pilot estimate picks it when absent
    #[arg(long)]
    pub p: Option<f64>,
    /// Bootstrap replicates (default 200)
    #[arg(long)]
    pub replicates: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct TheoremArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub hmax: Option<usize>,
    /// Pass threshold for |r(-hmax)/alpha - 1| and |r(hmax)|
    #[arg(long)]
    pub tol: Option<f64>,
}

impl Common {
    fn base_config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::theta1_example(),
        };
        set(&mut cfg.alpha, self.alpha);
        if self.out.is_some() {
            cfg.output = self.out.clone();
        }
        Ok(cfg)
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn set_opt<T>(slot: &mut Option<T>, value: Option<T>) {
    if value.is_some() {
        *slot = value;
    }
}

impl Command {
    /// Config file merged with the command-line overrides.
    pub fn resolve(&self) -> Result<RunConfig> {
        let (mut cfg, task) = match self {
            Command::Measures(a) => {
                let mut cfg = a.common.base_config()?;
                set_opt(&mut cfg.h_max, a.hmax);
                set_opt(&mut cfg.tol, a.tol);
                set_opt(
                    &mut cfg.kind,
                    a.kind.map(|k| match k {
                        KindArg::Cd => MeasureKind::Codifference,
                        KindArg::Cv => MeasureKind::Covariation,
                    }),
                );
                set_opt(
                    &mut cfg.direction,
                    a.direction.map(|d| match d {
                        DirectionArg::Minus => Direction::Minus,
                        DirectionArg::Plus => Direction::Plus,
                    }),
                );
                set_opt(&mut cfg.svg, a.svg.clone());
                (cfg, Task::Measures)
            }
            Command::Asymptotics(a) => {
                let mut cfg = a.common.base_config()?;
                set_opt(&mut cfg.h_max, a.hmax);
                set_opt(&mut cfg.tol, a.tol);
                (cfg, Task::Asymptotics)
            }
            Command::Ratio(a) => {
                let mut cfg = a.common.base_config()?;
                set_opt(&mut cfg.h_max, a.hmax);
                set_opt(&mut cfg.tol, a.tol);
                set_opt(&mut cfg.svg, a.svg.clone());
                (cfg, Task::Ratio)
            }
            Command::Simulate(a) => {
                let mut cfg = a.common.base_config()?;
                set_opt(&mut cfg.n, a.n);
                set_opt(&mut cfg.seed, a.seed);
                (cfg, Task::Simulate)
            }
            Command::Estimate(a) => {
                let mut cfg = a.common.base_config()?;
                set_opt(&mut cfg.input, a.input.clone());
                set_opt(&mut cfg.n, a.n);
                set_opt(&mut cfg.seed, a.seed);
                if let Some(w) = &a.window {
                    match w.as_slice() {
                        &[lo, hi] => cfg.window = Some([lo, hi]),
                        _ => return Err(Error::Config("--window takes LO,HI".into())),
                    }
                }
                set_opt(&mut cfg.p, a.p);
                set_opt(&mut cfg.replicates, a.replicates);
                (cfg, Task::Estimate)
            }
            Command::CheckTheorem1(a) => {
                let mut cfg = a.common.base_config()?;
                set_opt(&mut cfg.h_max, a.hmax);
                set_opt(&mut cfg.tol, a.tol);
                (cfg, Task::CheckTheorem1)
            }
            Command::Run(c) => {
                let cfg = c.base_config()?;
                let task = cfg
                    .task
                    .ok_or_else(|| Error::Config("`run` needs a \"task\" key in the config".into()))?;
                (cfg, task)
            }
        };
        cfg.task = Some(task);
        Ok(cfg)
    }
}

/// A CSV table with a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            writeln!(out, "{}", row.join(","))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Round-trip exact: 17 significant digits.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

/// The result of one task: the CSV table, a human-readable summary, and
/// whether the task counts as successful.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub task: Task,
    pub table: Table,
    pub summary: String,
    pub success: bool,
}

fn write_file(path: &Path, f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    std::fs::write(path, buf).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Executes the configured task. The table goes to `cfg.output` when set;
/// the SVG chart, for the tasks that draw one, to `cfg.svg`.
pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    let task = cfg
        .task
        .ok_or_else(|| Error::Config("no task given".into()))?;
    let model = cfg.model()?;
    let h_max = cfg.h_max.unwrap_or(DEFAULT_H_MAX);
    let mut summary: String;
    let mut success = true;
    let mut chart: Option<String> = None;

    let table = match task {
        Task::Measures => {
            let kind = cfg.kind.unwrap_or(MeasureKind::Codifference);
            let direction = cfg.direction.unwrap_or(Direction::Minus);
            let tol = cfg.tol.unwrap_or(DEFAULT_SERIES_TOL);
            let s = measure_series(&model, kind, direction, h_max, tol)?;
            let mut t = Table::new(vec!["h", "value"]);
            for (lag, v) in s.lags.iter().zip(&s.values) {
                t.rows.push(vec![lag.h.to_string(), fmt_num(*v)]);
            }
            summary = format!(
                "{} {}: {} lags, J <= {}, tail bound <= {:.3e}",
                kind.as_str(),
                direction.as_str(),
                s.values.len(),
                s.truncation_j,
                s.tail_bound
            );
            if cfg.svg.is_some() {
                let pts = s.lags.iter().zip(&s.values).map(|(l, v)| (l.h as f64, Some(*v))).collect();
                let name = format!("{} {}", kind.as_str(), direction.as_str());
                chart = Some(line_chart(&name, "h", &[Series { name: &name, points: pts }]));
            }
            t
        }
        Task::Asymptotics => {
            let tol = cfg.tol.unwrap_or(DEFAULT_SERIES_TOL);
            let c = asymptotic_constants(&model)?;
            let mut t = Table::new(vec![
                "h", "case", "kind", "direction", "series", "prediction", "exact",
            ]);
            for h in 1..=h_max {
                for kind in [MeasureKind::Codifference, MeasureKind::Covariation] {
                    for direction in [Direction::Minus, Direction::Plus] {
                        let lag = LagSpec { h, direction };
                        let series = evaluate(&model, kind, lag, tol)?.value;
                        let p = match kind {
                            MeasureKind::Codifference => asymptotic_cd(&c, lag),
                            MeasureKind::Covariation => asymptotic_cv(&c, lag),
                        };
                        t.rows.push(vec![
                            h.to_string(),
                            format!("{:?}", p.case.case),
                            kind.as_str().into(),
                            direction.as_str().into(),
                            fmt_num(series),
                            fmt_num(p.value),
                            p.exact.to_string(),
                        ]);
                    }
                }
            }
            let mut lines = vec![format!(
                "lambda1 = {}, lambda2 = {}, repeated = {}",
                fmt_num(c.eigen.lambda1),
                fmt_num(c.eigen.lambda2),
                c.eigen.degenerate
            )];
            for i in 1..=11 {
                if let Some(v) = c.d(i) {
                    lines.push(format!("D{i} = {}", fmt_num(v)));
                }
            }
            if let Some(e) = c.e3 {
                lines.push(format!("E3 = {}", fmt_num(e)));
            }
            summary = lines.join("\n");
            t
        }
        Task::Ratio => {
            let guard = cfg.tol.unwrap_or(DEFAULT_RATIO_GUARD);
            let r = ratio_series(&model, h_max, guard)?;
            let mut t = Table::new(vec!["h", "r_minus_over_alpha", "r_plus"]);
            for &h in &r.lags {
                t.rows.push(vec![
                    h.to_string(),
                    fmt_opt(r.r_minus_over_alpha(h)),
                    fmt_opt(r.r_plus_at(h)),
                ]);
            }
            summary = format!(
                "alpha = {}: r(-{h_max})/alpha = {}, r({h_max}) = {}",
                r.alpha,
                fmt_opt(r.r_minus_over_alpha(h_max)),
                fmt_opt(r.r_plus_at(h_max))
            );
            if cfg.svg.is_some() {
                let minus = r.lags.iter().map(|&h| (h as f64, r.r_minus_over_alpha(h))).collect();
                let plus = r.lags.iter().map(|&h| (h as f64, r.r_plus_at(h))).collect();
                chart = Some(line_chart(
                    &format!("CD/CV ratios, alpha = {}", r.alpha),
                    "h",
                    &[
                        Series { name: "r(-h)/alpha", points: minus },
                        Series { name: "r(h)", points: plus },
                    ],
                ));
            }
            t
        }
        Task::Simulate => {
            let n = cfg.n.unwrap_or(DEFAULT_SIMULATE_N);
            let seed = cfg.seed.unwrap_or(0);
            let path = PathSample::simulate(&model, n, seed)?;
            let mut t = Table::new(vec!["x1", "x2"]);
            t.rows = path
                .observations()
                .iter()
                .map(|[a, b]| vec![fmt_num(*a), fmt_num(*b)])
                .collect();
            summary = format!(
                "{n} observations, seed {seed}, burn-in {}",
                model.default_burn_in()
            );
            t
        }
        Task::Estimate => {
            let seed = cfg.seed.unwrap_or(0);
            let path = match &cfg.input {
                Some(p) => PathSample::read_csv(p)?,
                None => PathSample::simulate(&model, cfg.n.unwrap_or(DEFAULT_ESTIMATE_N), seed)?,
            };
            let window = cfg
                .window
                .map(|[lo, hi]| (lo, hi))
                .unwrap_or(DEFAULT_ALPHA_WINDOW);
            let boot = BlockBootstrap {
                block_len: None,
                replicates: cfg.replicates.unwrap_or(200),
                seed,
            };
            let est = match cfg.p {
                Some(p) => estimate_alpha(&path, window, p, &boot)?,
                None => estimate_alpha_auto(&path, window, &boot)?,
            };
            let mut t = Table::new(vec![
                "h",
                "codifference",
                "covariation",
                "covariation_stderr",
                "ratio",
                "ratio_stderr",
                "weight",
            ]);
            for l in &est.per_lag_ratios {
                t.rows.push(vec![
                    l.h.to_string(),
                    fmt_num(l.codifference),
                    fmt_num(l.covariation),
                    fmt_num(l.covariation_stderr),
                    fmt_opt(l.ratio),
                    fmt_num(l.ratio_stderr),
                    fmt_num(l.weight),
                ]);
            }
            summary = format!(
                "alpha_hat = {:.6} (bootstrap stderr {:.6}), window [{}, {}], p = {}",
                est.alpha_hat,
                est.stderr,
                window.0,
                window.1,
                est.p.map(|p| format!("{p:.4}")).unwrap_or_default()
            );
            if est.out_of_range {
                summary.push_str("\nwarning: estimate outside (1, 2)");
            }
            t
        }
        Task::CheckTheorem1 => {
            let tol = cfg.tol.unwrap_or(DEFAULT_THEOREM_TOL);
            let rep = theorem1_check(&model, h_max, tol)?;
            let mut t = Table::new(vec![
                "alpha",
                "h_max",
                "case",
                "r_minus_over_alpha",
                "minus_deviation",
                "r_plus",
                "tol",
                "passed",
            ]);
            t.rows.push(vec![
                fmt_num(rep.alpha),
                rep.h_max.to_string(),
                format!("{:?}", rep.case),
                fmt_opt(rep.r_minus_over_alpha),
                fmt_opt(rep.minus_deviation),
                fmt_opt(rep.r_plus),
                fmt_num(rep.tol),
                rep.passed().to_string(),
            ]);
            success = rep.passed();
            summary = format!(
                "|r(-{h})/alpha - 1| = {}, |r({h})| = {}, tol = {tol}: {}",
                fmt_opt(rep.minus_deviation),
                fmt_opt(rep.r_plus.map(f64::abs)),
                if success { "pass" } else { "FAIL" },
                h = rep.h_max
            );
            t
        }
    };

    if let Some(path) = &cfg.output {
        write_file(path, |buf| table.write_to(buf))?;
    }
    if let (Some(path), Some(svg)) = (&cfg.svg, chart) {
        write_file(path, |buf| {
            buf.extend_from_slice(svg.as_bytes());
            Ok(())
        })?;
    }
    Ok(RunReport {
        task,
        table,
        summary,
        success,
    })
}

/// Caps the global rayon pool at `STABLE_AR2_THREADS` when it is set.
pub fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(e.to_string()))
}

/// Parses the process arguments, runs the task and returns the exit code:
/// 0 on success, 1 on an error or a failed check.
pub fn main_entry() -> std::process::ExitCode {
    let cli = Cli::parse();
    let result = configure_threads()
        .and_then(|_| cli.command.resolve())
        .and_then(|cfg| {
            let report = run(&cfg)?;
            if cfg.output.is_none() {
                report.table.write_to(std::io::stdout().lock())?;
            }
            if !report.summary.is_empty() {
                eprintln!("{}", report.summary);
            }
            Ok(report.success)
        });
    match result {
        Ok(true) => std::process::ExitCode::SUCCESS,
        Ok(false) => std::process::ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::ExitCode::FAILURE
        }
    }
}
