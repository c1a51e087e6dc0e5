//! `raidlay` command-line front end.
//!
//! Every command loads or generates layouts, calls into the library, and
//! renders the result as an aligned table, CSV or JSON. Output depends only
//! on the arguments, so identical invocations produce identical bytes.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bits::AliveSet;
use crate::error::Error;
use crate::ft_analysis::{coverage, ft_degree, ft_table, CoverageReport, DEFAULT_MAX_EXACT_DISKS};
use crate::layout::{generate_named, parse_layout, serialize_layout, Layout, Scheme};
use crate::reliability::{
    exact_reliability_bounded, koon_reliability, minimal_path_sets_bounded,
    monte_carlo_reliability, naive_rbd_reliability, reliability_curve_bounded, CurveMode,
    DiskModel, ReliabilityCurve,
};
use crate::search::{
    maximizers, search_pp_offsets, search_replication_placements, search_rp_offsets, CandidateScore,
};

#[derive(Debug, Parser)]
#[command(
    name = "raidlay",
    version,
    about = "Fault tolerance and reliability of replicated/parity stripe layouts"
)]
pub struct RunConfig {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Largest disk count for exhaustive enumeration.
    #[arg(long, global = true, env = "RAIDLAY_MAX_EXACT_DISKS", default_value_t = DEFAULT_MAX_EXACT_DISKS, hide = true)]
    pub max_exact_disks: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate, print or validate layouts.
    Layout {
        #[command(flatten)]
        source: LayoutSource,
    },
    /// Fault-tolerance coverage tables and degree.
    Ft {
        #[command(flatten)]
        source: LayoutSource,
        /// Number of failed disks; omit for a per-f summary with the degree.
        #[arg(long)]
        failures: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Reliability curves over time, or values at fixed per-disk reliability.
    Rel {
        #[command(flatten)]
        source: LayoutSource,
        /// Disk failure rate per hour (exponential lifetimes).
        #[arg(long, default_value_t = crate::reliability::DEFAULT_LAMBDA, allow_negative_numbers = true)]
        lambda: f64,
        /// Time grid in hours as start:stop:step.
        #[arg(long = "t", default_value = "0:10000:100")]
        t_grid: TimeGrid,
        /// Evaluate at these per-disk reliabilities instead of a time grid.
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
        /// exact, koon:<k>, or naive-rbd.
        #[arg(long, default_value = "exact")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Monte Carlo reliability estimate.
    Mc {
        #[command(flatten)]
        source: LayoutSource,
        /// Per-disk survival probability.
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Exhaustive placement searches.
    Search {
        #[arg(value_enum)]
        family: Family,
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Rows of the ranking to print; 0 prints all.
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct LayoutSource {
    /// Comma-separated named schemes (RR, PP1, PP2, RP1, RP2).
    #[arg(long, value_delimiter = ',', conflicts_with = "file")]
    pub scheme: Vec<Scheme>,
    /// Layout files in the text layout format.
    #[arg(long, value_delimiter = ',')]
    pub file: Vec<PathBuf>,
    /// Disk count for generated schemes.
    #[arg(long, default_value_t = 5)]
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Pp,
    Rp,
    Replication,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid(pub Vec<f64>);

impl FromStr for TimeGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let nums = parts
            .iter()
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad number `{p}` in time grid `{s}`"))
            })
            .collect::<Result<Vec<f64>, String>>()?;
        let [start, stop, step] = nums[..] else {
            if let [t] = nums[..] {
                return Ok(TimeGrid(vec![t]));
            }
            return Err(format!("time grid `{s}` must be start:stop:step"));
        };
        if !(step > 0.0 && step.is_finite() && start.is_finite() && stop.is_finite())
            || stop < start
        {
            return Err(format!("time grid `{s}` needs step > 0 and stop >= start"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        Ok(TimeGrid(
            (0..=count).map(|i| start + i as f64 * step).collect(),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeArg(pub CurveMode);

impl FromStr for ModeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let lower = s.trim().to_ascii_lowercase();
        let mode = match lower.as_str() {
            "exact" => CurveMode::Exact,
            "naive" | "naive-rbd" => CurveMode::NaiveRbd,
            other => {
                let k = other
                    .strip_prefix("koon")
                    .map(|r| r.trim_start_matches([':', '(', '=']).trim_end_matches(')'))
                    .and_then(|r| r.parse::<usize>().ok())
                    .ok_or_else(|| {
                        format!("unknown mode `{s}` (expected exact, koon:<k> or naive-rbd)")
                    })?;
                CurveMode::Koon(k)
            }
        };
        Ok(ModeArg(mode))
    }
}

/// A command failure, carrying the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_capacity() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

/// Runs one command. Documents go to `--out` or `stdout`; warnings and the
/// one-line diagnostic go to `stderr`. Returns the exit code.
pub fn run(config: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match execute(config, stderr) {
        Ok(text) => {
            let written = match &config.out {
                Some(path) => std::fs::write(path, text.as_bytes())
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => 0,
                Err(msg) => {
                    let _ = writeln!(stderr, "error: {msg}");
                    1
                }
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(config: &RunConfig, stderr: &mut dyn Write) -> Result<String, Failure> {
    let limit = config.max_exact_disks;
    match &config.command {
        Command::Layout { source } => {
            let layouts = load(source, stderr)?;
            Ok(layouts
                .iter()
                .map(serialize_layout)
                .collect::<Vec<_>>()
                .join("\n"))
        }
        Command::Ft {
            source,
            failures,
            format,
        } => {
            let layouts = load(source, stderr)?;
            guard(&layouts, limit)?;
            match failures {
                Some(f) => ft_for_failures(&layouts, *f, *format),
                None => ft_summary(&layouts, *format),
            }
        }
        Command::Rel {
            source,
            lambda,
            t_grid,
            p,
            mode,
            format,
        } => {
            let layouts = load(source, stderr)?;
            if p.is_empty() {
                let model = DiskModel::exponential(*lambda)?;
                rel_curves(&layouts, model, &t_grid.0, mode.0, *format, limit)
            } else {
                rel_points(&layouts, p, mode.0, *format, limit)
            }
        }
        Command::Mc {
            source,
            p,
            trials,
            seed,
            format,
        } => {
            let layouts = load(source, stderr)?;
            mc(&layouts, *p, *trials, *seed, *format, limit)
        }
        Command::Search {
            family,
            n,
            top,
            format,
        } => {
            if *n > limit {
                return Err(Error::TooLargeForExact { n_disks: *n, limit }.into());
            }
            search(*family, *n, *top, *format)
        }
    }
}

fn load(source: &LayoutSource, stderr: &mut dyn Write) -> Result<Vec<Layout>, Failure> {
    match (source.scheme.is_empty(), source.file.is_empty()) {
        (true, true) => Err(invalid("give either --scheme or --file")),
        (false, false) => Err(invalid("--scheme and --file are mutually exclusive")),
        (false, true) => source
            .scheme
            .iter()
            .map(|&s| generate_named(s, source.n).map_err(Failure::from))
            .collect(),
        (true, false) => source
            .file
            .iter()
            .map(|path| {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
                let parsed =
                    parse_layout(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
                for w in &parsed.warnings {
                    let _ = writeln!(stderr, "{}: {w}", path.display());
                }
                Ok(parsed.layout)
            })
            .collect(),
    }
}

fn guard(layouts: &[Layout], limit: usize) -> Result<(), Failure> {
    match layouts.iter().find(|l| l.n_disks() > limit) {
        Some(l) => Err(Error::TooLargeForExact {
            n_disks: l.n_disks(),
            limit,
        }
        .into()),
        None => Ok(()),
    }
}

/// Twelve significant digits, trailing zeros trimmed, at least one decimal.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 {
            "0.0".into()
        } else {
            x.to_string()
        };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.push('0');
        }
    } else {
        s.push_str(".0");
    }
    s
}

fn fmt_time(t: f64) -> String {
    if t.fract() == 0.0 && t.abs() < 1e15 {
        format!("{}", t as i64)
    } else {
        fmt_sig(t)
    }
}

/// Left-aligned columns separated by two spaces.
fn render_table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in std::iter::once(header).chain(rows.iter().map(|r| r.as_slice())) {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i + 1 == row.len() {
                line.push_str(cell);
            } else {
                line.push_str(cell);
                line.push_str(&" ".repeat(widths[i] - cell.chars().count() + 2));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Failure {
            code: 2,
            message: e.to_string(),
        })
}

fn names(layouts: &[Layout]) -> Vec<String> {
    layouts.iter().map(|l| l.name().to_string()).collect()
}

#[derive(Serialize)]
struct CoverageJson<'a> {
    layout: &'a str,
    n: usize,
    f: usize,
    total: u64,
    recovered: u64,
    failing: Vec<Vec<usize>>,
}

impl<'a> From<&'a CoverageReport> for CoverageJson<'a> {
    fn from(r: &'a CoverageReport) -> Self {
        CoverageJson {
            layout: &r.layout,
            n: r.n,
            f: r.f,
            total: r.total,
            recovered: r.recovered,
            failing: r.failing.iter().map(|a| a.to_vec()).collect(),
        }
    }
}

fn ft_for_failures(layouts: &[Layout], f: usize, format: Format) -> Result<String, Failure> {
    let n = layouts[0].n_disks();
    if layouts.iter().any(|l| l.n_disks() != n) {
        return Err(invalid(
            "side-by-side tables need layouts with equal disk counts",
        ));
    }
    match format {
        Format::Json => {
            let reports = layouts
                .iter()
                .map(|l| coverage(l, f))
                .collect::<Result<Vec<_>, _>>()?;
            json(&reports.iter().map(CoverageJson::from).collect::<Vec<_>>())
        }
        Format::Table | Format::Csv => {
            let tables = layouts
                .iter()
                .map(|l| ft_table(l, f))
                .collect::<Result<Vec<_>, _>>()?;
            let (yes, no) = match format {
                Format::Table => ("✓", "x"),
                _ => ("1", "0"),
            };
            let rows: Vec<Vec<String>> = (0..tables[0].len())
                .map(|i| {
                    std::iter::once(tables[0][i].alive.label())
                        .chain(
                            tables
                                .iter()
                                .map(|t| (if t[i].recoverable { yes } else { no }).to_string()),
                        )
                        .collect()
                })
                .collect();
            if format == Format::Table {
                let header: Vec<String> = std::iter::once("Active Disks".to_string())
                    .chain(names(layouts))
                    .collect();
                let mut out = render_table(&header, &rows);
                let totals: Vec<String> = tables
                    .iter()
                    .zip(layouts)
                    .map(|(t, l)| {
                        format!(
                            "{} {}/{}",
                            l.name(),
                            t.iter().filter(|r| r.recoverable).count(),
                            t.len()
                        )
                    })
                    .collect();
                let _ = writeln!(out, "# f = {f}; recovered: {}", totals.join(", "));
                Ok(out)
            } else {
                let mut out = String::new();
                let _ = writeln!(out, "alive,{}", names(layouts).join(","));
                for row in rows {
                    let _ = writeln!(out, "{}", row.join(","));
                }
                Ok(out)
            }
        }
    }
}

#[derive(Serialize)]
struct FtSummary<'a> {
    layout: String,
    n: usize,
    ft_degree: usize,
    coverage: Vec<CoverageJson<'a>>,
}

fn ft_summary(layouts: &[Layout], format: Format) -> Result<String, Failure> {
    let reports: Vec<(usize, Vec<CoverageReport>)> = layouts
        .iter()
        .map(|l| {
            let reports = (0..=l.n_disks())
                .map(|f| coverage(l, f))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((ft_degree(l).0, reports))
        })
        .collect::<Result<_, Error>>()?;
    match format {
        Format::Json => {
            let docs: Vec<FtSummary> = layouts
                .iter()
                .zip(&reports)
                .map(|(l, (deg, rs))| FtSummary {
                    layout: l.name().to_string(),
                    n: l.n_disks(),
                    ft_degree: *deg,
                    coverage: rs.iter().map(CoverageJson::from).collect(),
                })
                .collect();
            json(&docs)
        }
        Format::Table => {
            let max_n = layouts.iter().map(|l| l.n_disks()).max().unwrap_or(0);
            let header: Vec<String> = ["layout", "n", "ft_degree"]
                .into_iter()
                .map(String::from)
                .chain((0..=max_n).map(|f| format!("f={f}")))
                .collect();
            let rows: Vec<Vec<String>> = layouts
                .iter()
                .zip(&reports)
                .map(|(l, (deg, rs))| {
                    [
                        l.name().to_string(),
                        l.n_disks().to_string(),
                        deg.to_string(),
                    ]
                    .into_iter()
                    .chain(rs.iter().map(|r| format!("{}/{}", r.recovered, r.total)))
                    .collect()
                })
                .collect();
            Ok(render_table(&header, &rows))
        }
        Format::Csv => {
            let mut out = String::from("layout,n,ft_degree,f,recovered,total\n");
            for (l, (deg, rs)) in layouts.iter().zip(&reports) {
                for r in rs {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        l.name(),
                        l.n_disks(),
                        deg,
                        r.f,
                        r.recovered,
                        r.total
                    );
                }
            }
            Ok(out)
        }
    }
}

fn rel_curves(
    layouts: &[Layout],
    model: DiskModel,
    t_grid: &[f64],
    mode: CurveMode,
    format: Format,
    limit: usize,
) -> Result<String, Failure> {
    let curves: Vec<ReliabilityCurve> = layouts
        .iter()
        .map(|l| reliability_curve_bounded(l, model, t_grid, mode, limit))
        .collect::<Result<_, _>>()?;
    match format {
        Format::Csv => {
            let mut out = String::from("t_hours,layout,mode,reliability\n");
            for (i, &t) in t_grid.iter().enumerate() {
                for c in &curves {
                    let _ = writeln!(
                        out,
                        "{},{},{},{}",
                        fmt_time(t),
                        c.layout,
                        mode.label(),
                        fmt_sig(c.values[i])
                    );
                }
            }
            Ok(out)
        }
        Format::Table => {
            let header: Vec<String> = std::iter::once("t_hours".to_string())
                .chain(names(layouts))
                .collect();
            let rows: Vec<Vec<String>> = t_grid
                .iter()
                .enumerate()
                .map(|(i, &t)| {
                    std::iter::once(fmt_time(t))
                        .chain(curves.iter().map(|c| fmt_sig(c.values[i])))
                        .collect()
                })
                .collect();
            let mut out = format!(
                "# mode = {}, lambda = {}/h\n",
                mode.label(),
                fmt_sig(model.lambda())
            );
            out.push_str(&render_table(&header, &rows));
            Ok(out)
        }
        Format::Json => {
            #[derive(Serialize)]
            struct CurveJson<'a> {
                layout: &'a str,
                mode: String,
                lambda: f64,
                t_hours: &'a [f64],
                reliability: Vec<f64>,
            }
            let docs: Vec<CurveJson> = curves
                .iter()
                .map(|c| CurveJson {
                    layout: &c.layout,
                    mode: mode.label(),
                    lambda: model.lambda(),
                    t_hours: &c.t_grid,
                    reliability: c.values.iter().map(|&v| round_sig(v)).collect(),
                })
                .collect();
            json(&docs)
        }
    }
}

fn round_sig(v: f64) -> f64 {
    fmt_sig(v).parse().unwrap_or(v)
}

fn point_value(layout: &Layout, p: f64, mode: CurveMode, limit: usize) -> Result<f64, Error> {
    match mode {
        CurveMode::Exact => exact_reliability_bounded(layout, p, limit),
        CurveMode::Koon(k) => koon_reliability(k, layout.n_disks(), p),
        CurveMode::NaiveRbd => {
            let paths = minimal_path_sets_bounded(layout, limit)?;
            if paths.is_empty() {
                Ok(0.0)
            } else {
                naive_rbd_reliability(&paths, p)
            }
        }
    }
}

fn rel_points(
    layouts: &[Layout],
    ps: &[f64],
    mode: CurveMode,
    format: Format,
    limit: usize,
) -> Result<String, Failure> {
    let values: Vec<Vec<f64>> = ps
        .iter()
        .map(|&p| {
            layouts
                .iter()
                .map(|l| point_value(l, p, mode, limit))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    match format {
        Format::Csv => {
            let mut out = String::from("p,layout,mode,reliability\n");
            for (p, row) in ps.iter().zip(&values) {
                for (l, v) in layouts.iter().zip(row) {
                    let _ = writeln!(
                        out,
                        "{},{},{},{}",
                        fmt_sig(*p),
                        l.name(),
                        mode.label(),
                        fmt_sig(*v)
                    );
                }
            }
            Ok(out)
        }
        Format::Table => {
            let header: Vec<String> = std::iter::once("p".to_string())
                .chain(names(layouts))
                .collect();
            let rows: Vec<Vec<String>> = ps
                .iter()
                .zip(&values)
                .map(|(p, row)| {
                    std::iter::once(fmt_sig(*p))
                        .chain(row.iter().map(|v| fmt_sig(*v)))
                        .collect()
                })
                .collect();
            let mut out = format!("# mode = {}\n", mode.label());
            out.push_str(&render_table(&header, &rows));
            Ok(out)
        }
        Format::Json => {
            #[derive(Serialize)]
            struct PointJson<'a> {
                layout: &'a str,
                mode: String,
                p: f64,
                reliability: f64,
            }
            let docs: Vec<PointJson> = ps
                .iter()
                .zip(&values)
                .flat_map(|(&p, row)| {
                    layouts.iter().zip(row).map(move |(l, &v)| PointJson {
                        layout: l.name(),
                        mode: mode.label(),
                        p,
                        reliability: round_sig(v),
                    })
                })
                .collect();
            json(&docs)
        }
    }
}

#[derive(Serialize)]
struct McRow {
    layout: String,
    p: f64,
    trials: u64,
    seed: u64,
    estimate: f64,
    std_error: f64,
    exact: Option<f64>,
    z_score: Option<f64>,
}

fn mc(
    layouts: &[Layout],
    p: f64,
    trials: u64,
    seed: u64,
    format: Format,
    limit: usize,
) -> Result<String, Failure> {
    let rows: Vec<McRow> = layouts
        .iter()
        .map(|l| {
            let est = monte_carlo_reliability(l, p, trials, seed)?;
            let exact = if l.n_disks() <= limit {
                Some(exact_reliability_bounded(l, p, limit)?)
            } else {
                None
            };
            let z_score = exact
                .and_then(|x| (est.std_error > 0.0).then(|| (est.estimate - x) / est.std_error));
            Ok(McRow {
                layout: l.name().to_string(),
                p,
                trials,
                seed,
                estimate: est.estimate,
                std_error: est.std_error,
                exact,
                z_score,
            })
        })
        .collect::<Result<_, Error>>()?;
    let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), fmt_sig);
    match format {
        Format::Json => json(&rows),
        Format::Table | Format::Csv => {
            let header: Vec<String> = [
                "layout",
                "p",
                "trials",
                "seed",
                "estimate",
                "std_error",
                "exact",
                "z",
            ]
            .into_iter()
            .map(String::from)
            .collect();
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.layout.clone(),
                        fmt_sig(r.p),
                        r.trials.to_string(),
                        r.seed.to_string(),
                        fmt_sig(r.estimate),
                        fmt_sig(r.std_error),
                        opt(r.exact),
                        opt(r.z_score),
                    ]
                })
                .collect();
            if format == Format::Table {
                Ok(render_table(&header, &body))
            } else {
                let mut out = header.join(",") + "\n";
                for row in body {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
                Ok(out)
            }
        }
    }
}

fn score_rows(ranked: &[CandidateScore], top: usize) -> Vec<Vec<String>> {
    let take = if top == 0 {
        ranked.len()
    } else {
        top.min(ranked.len())
    };
    ranked[..take]
        .iter()
        .enumerate()
        .map(|(i, c)| {
            vec![
                (i + 1).to_string(),
                c.label.clone(),
                c.ft_degree.to_string(),
                format!("{}/{}", c.next_recovered, c.next_total),
            ]
        })
        .collect()
}

fn search(family: Family, n: usize, top: usize, format: Format) -> Result<String, Failure> {
    let header: Vec<String> = ["rank", "candidate", "ft_degree", "coverage_next"]
        .into_iter()
        .map(String::from)
        .collect();
    match family {
        Family::Pp | Family::Rp => {
            let ranked = if family == Family::Pp {
                search_pp_offsets(n)?
            } else {
                search_rp_offsets(n)?
            };
            let best = maximizers(&ranked).len();
            match format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Doc<'a> {
                        n: usize,
                        candidates: usize,
                        maximizers: usize,
                        ranking: &'a [CandidateScore],
                    }
                    json(&Doc {
                        n,
                        candidates: ranked.len(),
                        maximizers: best,
                        ranking: &ranked,
                    })
                }
                Format::Table => {
                    let mut out = format!(
                        "# n = {n}; {} candidates, {best} share the best score\n",
                        ranked.len()
                    );
                    out.push_str(&render_table(&header, &score_rows(&ranked, top)));
                    Ok(out)
                }
                Format::Csv => Ok(csv_rows(&header, &score_rows(&ranked, top))),
            }
        }
        Family::Replication => {
            let result = search_replication_placements(n)?;
            match format {
                Format::Json => json(&result),
                Format::Table => {
                    let mut out = String::new();
                    let _ = writeln!(out, "# n = {n}; balanced replication placements (3 copies per block, 3 cells per disk)");
                    let _ = writeln!(out, "placements enumerated: {}", result.placements);
                    let _ = writeln!(out, "classes up to relabeling: {}", result.classes);
                    let _ = writeln!(out, "max ft degree: {}", result.max_ft_degree);
                    let _ = writeln!(
                        out,
                        "max recovered at f=3: {}/{}",
                        result.max_recovered_at_3, result.total_at_3
                    );
                    let _ = writeln!(
                        out,
                        "classes tolerating every 3-disk failure: {}",
                        result.classes_tolerating_3
                    );
                    out.push_str(&render_table(&header, &score_rows(&result.ranking, top)));
                    Ok(out)
                }
                Format::Csv => Ok(csv_rows(&header, &score_rows(&result.ranking, top))),
            }
        }
    }
}

fn csv_rows(header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",") + "\n";
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Alive sets parsed from `D0 D2` style labels; used by tests of rendered
/// tables.
pub fn parse_alive_label(label: &str) -> Option<AliveSet> {
    label
        .split_whitespace()
        .map(|t| t.strip_prefix('D').and_then(|d| d.parse::<usize>().ok()))
        .collect::<Option<Vec<_>>>()
        .map(|v| v.into_iter().collect())
}
