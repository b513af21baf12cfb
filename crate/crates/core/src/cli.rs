//! Command-line front end: parameter scans, record certification and
//! corpus audits. Output is CSV or JSON, with numbers rounded to 12
//! significant digits so repeated runs are byte-identical.
//!
//! Exit codes: 0 success, 1 usage or schema error, 2 I/O error, 3 numerical
//! failure (including an audit that finds a disagreement).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::macrorealism::corpus::{
    random_classical_record, random_nsit_record, random_quantum_record, rng,
};
use crate::macrorealism::{
    certify, equivalence_audit, AuditSummary, EquivalenceReport, ExperimentRecord, RecordError,
    DEFAULT_TOL,
};
use crate::spin_lg::{
    gp_lg_sum, gp_lg_sum_simulated, kb_finite_k, kb_k, kb_maximum, sharpness_threshold,
    AngleSchedule, OddMode, SharpnessThreshold, SpinValue,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Numerical(e.to_string())
    }
}

/// Inclusive range of 2j values: `N` or `A..B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpinRange {
    pub first: u32,
    pub last: u32,
}

impl SpinRange {
    pub fn spins(&self) -> impl Iterator<Item = SpinValue> {
        (self.first..=self.last).map(|t| SpinValue::new(t).expect("range excludes zero"))
    }
}

impl FromStr for SpinRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("'{}' is not a non-negative integer", t.trim()))
        };
        let (first, last) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let n = num(s)?;
                (n, n)
            }
        };
        if first == 0 {
            return Err("2j must be at least 1".into());
        }
        if first > last {
            return Err(format!("empty spin range {first}..{last}"));
        }
        if last > 400 {
            return Err(format!("2j = {last} is beyond the supported 400"));
        }
        Ok(Self { first, last })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "lgspin",
    version,
    about = "Leggett-Garg temporal correlations for arbitrary spin"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LambdaRange {
    #[arg(long, default_value_t = 0.5)]
    lambda_min: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda_max: f64,
    #[arg(long, default_value_t = 0.001)]
    lambda_step: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// K for the block scheme, closed form and beam simulation, per spin.
    GpScan {
        #[arg(long, default_value = "1..20")]
        two_j: SpinRange,
        #[arg(long, default_value = "canonical", value_parser = parse_schedule)]
        schedule: AngleSchedule,
        #[arg(long, default_value = "rabi", value_parser = parse_odd_mode)]
        odd_mode: OddMode,
        /// Sharpness used by the simulated column.
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Large-j parity-scheme K(x) on a grid over [0, π], with its maximum.
    KbScan {
        #[arg(long, default_value_t = 1000)]
        points: usize,
        /// Add finite-spin columns for these 2j values.
        #[arg(long)]
        two_j: Option<SpinRange>,
        #[command(flatten)]
        output: Output,
    },
    /// K under unsharp measurement for both schemes, with threshold crossings.
    UnsharpScan {
        #[command(flatten)]
        lambda: LambdaRange,
        #[arg(long, default_value = "1")]
        two_j: SpinRange,
        #[arg(long, default_value = "canonical", value_parser = parse_schedule)]
        schedule: AngleSchedule,
        #[arg(long, default_value = "rabi", value_parser = parse_odd_mode)]
        odd_mode: OddMode,
        #[command(flatten)]
        output: Output,
    },
    /// Full macrorealism verdict for a record file (JSON).
    Certify {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that the LG, LG-CH and joint-distribution predicates agree
    /// across a seeded random corpus.
    Audit {
        /// Random records with consistent marginals.
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Records generated from quantum simulations.
        #[arg(long, default_value_t = 200)]
        quantum: usize,
        /// Records generated from planted classical distributions.
        #[arg(long, default_value_t = 0)]
        classical: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Include one entry per record.
        #[arg(long)]
        records: bool,
        #[command(flatten)]
        output: Output,
    },
}

fn parse_schedule(s: &str) -> Result<AngleSchedule, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

fn parse_odd_mode(s: &str) -> Result<OddMode, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

/// Run with full argv (program name first) and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("lgspin: {e}");
            e.exit_code()
        }
    }
}

fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::GpScan {
            two_j,
            schedule,
            odd_mode,
            lambda,
            output,
        } => {
            check_lambda(lambda)?;
            let text = gp_scan(
                two_j,
                &schedule,
                odd_mode,
                lambda,
                output.format.unwrap_or(Format::Csv),
            )?;
            emit(output.out.as_deref(), &text)
        }
        Command::KbScan {
            points,
            two_j,
            output,
        } => {
            if points < 2 {
                return Err(CliError::Usage("--points must be at least 2".into()));
            }
            let text = kb_scan(points, two_j, output.format.unwrap_or(Format::Csv));
            emit(output.out.as_deref(), &text)
        }
        Command::UnsharpScan {
            lambda,
            two_j,
            schedule,
            odd_mode,
            output,
        } => {
            if two_j.first != two_j.last {
                return Err(CliError::Usage(
                    "unsharp-scan takes a single --two-j value".into(),
                ));
            }
            let grid = lambda_grid(&lambda)?;
            let spin = SpinValue::new(two_j.first)?;
            let text = unsharp_scan(
                &grid,
                spin,
                &schedule,
                odd_mode,
                output.format.unwrap_or(Format::Csv),
            )?;
            emit(output.out.as_deref(), &text)
        }
        Command::Certify { path, tol, out } => {
            check_tol(tol)?;
            let text = run_certify(&path, tol)?;
            emit(out.as_deref(), &text)
        }
        Command::Audit {
            count,
            quantum,
            classical,
            seed,
            tol,
            records,
            output,
        } => {
            check_tol(tol)?;
            let (text, summary) = audit(
                count,
                quantum,
                classical,
                seed,
                tol,
                records,
                output.format.unwrap_or(Format::Json),
            )?;
            emit(output.out.as_deref(), &text)?;
            if summary.all_agree() {
                Ok(())
            } else {
                Err(CliError::Numerical(format!(
                    "predicates disagree on {} of {} records",
                    summary.records - summary.agree,
                    summary.records
                )))
            }
        }
    }
}

fn check_lambda(lambda: f64) -> Result<(), CliError> {
    if lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "sharpness {lambda} is outside (0, 1]"
        )))
    }
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol >= 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--tol {tol} must be finite and non-negative"
        )))
    }
}

fn lambda_grid(r: &LambdaRange) -> Result<Vec<f64>, CliError> {
    if !(r.lambda_step > 0.0 && r.lambda_step.is_finite()) {
        return Err(CliError::Usage("--lambda-step must be positive".into()));
    }
    check_lambda(r.lambda_min)?;
    check_lambda(r.lambda_max)?;
    if r.lambda_min > r.lambda_max {
        return Err(CliError::Usage("empty sharpness range".into()));
    }
    let n = ((r.lambda_max - r.lambda_min) / r.lambda_step + 1e-9).floor() as usize;
    if n > 10_000_000 {
        return Err(CliError::Usage("sharpness grid is too large".into()));
    }
    Ok((0..=n)
        .map(|k| round_sig(r.lambda_min + k as f64 * r.lambda_step))
        .filter(|l| *l <= 1.0)
        .collect())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

/// Round to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let v: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

pub fn fmt_num(x: f64) -> String {
    let v = round_sig(x);
    if v != 0.0 && (v.abs() < 1e-4 || v.abs() >= 1e15) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// Recursively rounds every number in a JSON value.
fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(f) if !n.is_i64() && !n.is_u64() => json!(round_sig(f)),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

fn render_json(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&round_json(v)).expect("JSON value serialises");
    s.push('\n');
    s
}

fn csv(header: &[&str], rows: &[Vec<String>], trailer: &[String]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    for t in trailer {
        let _ = writeln!(s, "# {t}");
    }
    s
}

pub fn gp_scan(
    range: SpinRange,
    schedule: &AngleSchedule,
    mode: OddMode,
    lambda: f64,
    format: Format,
) -> Result<String, CliError> {
    let spins: Vec<SpinValue> = range.spins().collect();
    let rows: Vec<(SpinValue, f64, f64)> = spins
        .par_iter()
        .map(|&s| {
            Ok((
                s,
                gp_lg_sum(s, schedule),
                gp_lg_sum_simulated(s, schedule, lambda, mode)?,
            ))
        })
        .collect::<Result<_, crate::Error>>()?;
    Ok(match format {
        Format::Csv => csv(
            &["two_j", "j", "k_closed", "k_simulated"],
            &rows
                .iter()
                .map(|(s, c, m)| {
                    vec![
                        s.two_j().to_string(),
                        fmt_num(s.j()),
                        fmt_num(*c),
                        fmt_num(*m),
                    ]
                })
                .collect::<Vec<_>>(),
            &[],
        ),
        Format::Json => render_json(json!({
            "schedule": schedule.alphas(),
            "lambda": lambda,
            "rows": rows.iter().map(|(s, c, m)| json!({
                "two_j": s.two_j(), "j": s.j(), "k_closed": c, "k_simulated": m,
            })).collect::<Vec<_>>(),
        })),
    })
}

pub fn kb_scan(points: usize, two_j: Option<SpinRange>, format: Format) -> String {
    let spins: Vec<SpinValue> = two_j.map(|r| r.spins().collect()).unwrap_or_default();
    let xs: Vec<f64> = (0..=points)
        .map(|k| std::f64::consts::PI * k as f64 / points as f64)
        .collect();
    let rows: Vec<(f64, f64, Vec<f64>)> = xs
        .par_iter()
        .map(|&x| {
            (
                x,
                kb_k(x),
                spins.iter().map(|&s| kb_finite_k(s, x)).collect(),
            )
        })
        .collect();
    let best = kb_maximum();
    match format {
        Format::Csv => {
            let mut header = vec!["x".to_string(), "k".to_string()];
            header.extend(spins.iter().map(|s| format!("k_two_j_{}", s.two_j())));
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            csv(
                &header,
                &rows
                    .iter()
                    .map(|(x, k, f)| {
                        let mut r = vec![fmt_num(*x), fmt_num(*k)];
                        r.extend(f.iter().map(|v| fmt_num(*v)));
                        r
                    })
                    .collect::<Vec<_>>(),
                &[format!(
                    "argmax x={} k={}",
                    fmt_num(best.x),
                    fmt_num(best.value)
                )],
            )
        }
        Format::Json => render_json(json!({
            "rows": rows.iter().map(|(x, k, f)| {
                let mut o = json!({"x": x, "k": k});
                for (s, v) in spins.iter().zip(f) {
                    o[format!("k_two_j_{}", s.two_j())] = json!(v);
                }
                o
            }).collect::<Vec<_>>(),
            "argmax": {"x": best.x, "k": best.value},
        })),
    }
}

fn crossing_json(k_sharp: f64, grid: &[f64], ks: &[f64]) -> Value {
    let threshold = match sharpness_threshold(k_sharp) {
        SharpnessThreshold::Crossing(l) => json!(l),
        SharpnessThreshold::NeverViolated => Value::Null,
    };
    // first grid sharpness with K > 2
    let first = grid.iter().zip(ks).find(|(_, &k)| k > 2.0).map(|(l, _)| *l);
    json!({"k_sharp": k_sharp, "threshold": threshold, "first_violating_lambda": first})
}

pub fn unsharp_scan(
    grid: &[f64],
    spin: SpinValue,
    schedule: &AngleSchedule,
    mode: OddMode,
    format: Format,
) -> Result<String, CliError> {
    let k_gp: Vec<f64> = grid
        .par_iter()
        .map(|&l| gp_lg_sum_simulated(spin, schedule, l, mode))
        .collect::<Result<_, crate::Error>>()?;
    let kb_sharp = kb_maximum().value;
    let k_kb: Vec<f64> = grid.iter().map(|l| l * l * kb_sharp).collect();
    let gp_sharp = gp_lg_sum_simulated(spin, schedule, 1.0, mode)?;
    let crossings = json!({
        "gp": crossing_json(gp_sharp, grid, &k_gp),
        "kb": crossing_json(kb_sharp, grid, &k_kb),
    });
    Ok(match format {
        Format::Csv => {
            let line = |name: &str| {
                let c = &crossings[name];
                let f = |v: &Value| v.as_f64().map_or("none".to_string(), fmt_num);
                format!(
                    "crossing {name} k_sharp={} threshold={} first_violating_lambda={}",
                    f(&c["k_sharp"]),
                    f(&c["threshold"]),
                    f(&c["first_violating_lambda"])
                )
            };
            csv(
                &["lambda", "k_gp", "k_kb"],
                &grid
                    .iter()
                    .zip(&k_gp)
                    .zip(&k_kb)
                    .map(|((l, g), k)| vec![fmt_num(*l), fmt_num(*g), fmt_num(*k)])
                    .collect::<Vec<_>>(),
                &[line("gp"), line("kb")],
            )
        }
        Format::Json => render_json(json!({
            "two_j": spin.two_j(),
            "rows": grid.iter().zip(&k_gp).zip(&k_kb)
                .map(|((l, g), k)| json!({"lambda": l, "k_gp": g, "k_kb": k}))
                .collect::<Vec<_>>(),
            "crossings": crossings,
        })),
    })
}

pub fn load_record(path: &Path) -> Result<ExperimentRecord, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ExperimentRecord::from_json_str(&text).map_err(|e| match e {
        RecordError::Parse(_) | RecordError::Invalid(_) => {
            CliError::Usage(format!("{}: {e}", path.display()))
        }
    })
}

pub fn run_certify(path: &Path, tol: f64) -> Result<String, CliError> {
    let rec = load_record(path)?;
    let verdict = certify(&rec, tol)?;
    Ok(render_json(json!({
        "record": rec.to_json_value(),
        "tol": tol,
        "verdict": serde_json::to_value(&verdict).expect("verdict serialises"),
    })))
}

/// Corpus audit. Records are generated sequentially from the seed and then
/// audited in parallel, so results do not depend on the thread count.
pub fn audit(
    count: usize,
    quantum: usize,
    classical: usize,
    seed: u64,
    tol: f64,
    per_record: bool,
    format: Format,
) -> Result<(String, AuditSummary), CliError> {
    let mut r = rng(seed);
    let mut corpus: Vec<(&str, ExperimentRecord)> = Vec::with_capacity(count + quantum + classical);
    for _ in 0..count {
        corpus.push(("nsit", random_nsit_record(&mut r)?));
    }
    for _ in 0..quantum {
        corpus.push(("quantum", random_quantum_record(&mut r)?));
    }
    for _ in 0..classical {
        corpus.push(("classical", random_classical_record(&mut r)?.1));
    }
    let reports: Vec<EquivalenceReport> = corpus
        .par_iter()
        .map(|(_, rec)| equivalence_audit(rec, tol))
        .collect::<Result<_, crate::Error>>()?;
    let mut summary = AuditSummary::default();
    for rep in &reports {
        summary.add(rep);
    }
    let text = match format {
        Format::Json => {
            let mut v = json!({
                "seed": seed,
                "tol": tol,
                "summary": serde_json::to_value(&summary).expect("summary serialises"),
            });
            if per_record {
                v["records"] = json!(corpus
                    .iter()
                    .zip(&reports)
                    .enumerate()
                    .map(|(i, ((src, _), rep))| {
                        let mut o = serde_json::to_value(rep).expect("report serialises");
                        o["index"] = json!(i);
                        o["source"] = json!(src);
                        o
                    })
                    .collect::<Vec<_>>());
            }
            render_json(v)
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = if per_record {
                corpus
                    .iter()
                    .zip(&reports)
                    .enumerate()
                    .map(|(i, ((src, _), rep))| {
                        vec![
                            i.to_string(),
                            src.to_string(),
                            rep.nsit.to_string(),
                            rep.lg_and_nsit.to_string(),
                            rep.canonical_lg_and_nsit.to_string(),
                            rep.lgch.to_string(),
                            rep.nirm.to_string(),
                            rep.on_boundary.to_string(),
                            rep.agree.to_string(),
                            rep.canonical_agree.to_string(),
                        ]
                    })
                    .collect()
            } else {
                Vec::new()
            };
            csv(
                &[
                    "index",
                    "source",
                    "nsit",
                    "lg_and_nsit",
                    "canonical_lg_and_nsit",
                    "lgch",
                    "nirm",
                    "on_boundary",
                    "agree",
                    "canonical_agree",
                ],
                &rows,
                &[format!(
                    "seed={seed} records={} agree={} canonical_agree={} feasible={} infeasible={} nsit_failures={} boundary={}",
                    summary.records,
                    summary.agree,
                    summary.canonical_agree,
                    summary.feasible,
                    summary.infeasible,
                    summary.nsit_failures,
                    summary.boundary
                )],
            )
        }
    };
    Ok((text, summary))
}
