//! `latcom`: subgroup commutativity degrees of finite groups.

mod cache;
mod scan;

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use latcom_core::degrees::{Criterion31, DegreeReport, Degrees, REPORT_SCHEMA};
use latcom_core::density::{
    build_plan, converge_to_tolerance, convergence_table, verify_smallest_instance_capped,
    zero_target_table, DensityPlan,
};
use latcom_core::group::{make_group_capped, parse_cayley_text, FiniteGroup, DEFAULT_ORDER_CAP};
use latcom_core::lattice::{all_subgroups_capped, LatticeEntry};
use latcom_core::verify::{run_suite, Check, SuiteOutcome, VerifyOptions, SUITES};
use latcom_core::{Error, ExactRational, FamilySpec};
use rayon::prelude::*;
use serde::Serialize;

use cache::Cache;
use scan::{expand, parse_param, ExpandError};

#[derive(Parser)]
#[command(name = "latcom", version, about = "Subgroup commutativity degrees of finite groups")]
struct Cli {
    /// Output format (default: csv for `density`, json otherwise)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// JSON-lines cache of degree reports
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Refuse to build groups larger than this
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER_CAP)]
    order_cap: usize,
    /// Worker threads
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Compute f on every subgroup and check it is constant on classes
    #[arg(long, global = true)]
    full_f_check: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Sd,
    Imf,
    Gamma,
    Criterion31,
}

const ALL_OUTPUTS: [Output; 4] = [Output::Sd, Output::Imf, Output::Gamma, Output::Criterion31];

#[derive(Subcommand)]
enum Command {
    /// Full degree report for one group, e.g. `D(6)` or `prod(D(6),Z(5))`
    Report { spec: String },
    /// Run verification suites; `all` runs every suite
    Verify {
        #[arg(required = true)]
        suites: Vec<String>,
        /// List passing checks as well as failures
        #[arg(long)]
        all_checks: bool,
    },
    /// Evaluate a family pattern over a parameter grid, e.g. `D(2n) --param n=2..50`
    Scan {
        pattern: String,
        /// `name=lo..hi[:step]` or `name=v1,v2,...`
        #[arg(long = "param", short = 'p')]
        params: Vec<String>,
        #[arg(long, value_enum, value_delimiter = ',')]
        outputs: Vec<Output>,
        /// Largest number of grid points
        #[arg(long, default_value_t = 10_000)]
        max_specs: usize,
    },
    /// Convergence table of relative degrees approaching a rational target
    Density {
        /// `a/b` with 0 <= a <= b
        #[arg(long)]
        target: String,
        /// Stop at the first row below this error (`1/100` or `0.01`)
        #[arg(long)]
        tolerance: Option<String>,
        /// Rows of the doubling schedule when no tolerance is given
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Degree report for a group given by a Cayley table file
    Import {
        path: PathBuf,
        #[arg(long)]
        label: Option<String>,
    },
    /// Dump the subgroup lattice
    Lattice { spec: String },
}

enum CliError {
    Core(Error),
    Usage(String),
    Io(io::Error),
    Cap(String),
    Failed,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed => 1,
            CliError::Core(Error::ClassConstancyViolation(..)) => 1,
            CliError::Core(Error::OrderCapExceeded { .. } | Error::SearchBoundExceeded) => 3,
            CliError::Cap(_) => 3,
            CliError::Core(_) | CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) | CliError::Cap(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Failed => write!(f, "verification failed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        if !e.is_io_error() {
            return CliError::Io(io::Error::other(e));
        }
        match e.into_kind() {
            csv::ErrorKind::Io(e) => CliError::Io(e),
            _ => unreachable!("checked by is_io_error"),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        match e.io_error_kind() {
            Some(kind) => CliError::Io(io::Error::new(kind, e)),
            None => CliError::Io(io::Error::other(e)),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("latcom: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        // A closed stdout (`latcom ... | head`) is not an error.
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::Failed) {
                eprintln!("latcom: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let format = |default| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Report { spec } => {
            let spec: FamilySpec = spec.parse()?;
            let mut cache = Cache::open(cli.cache.as_deref())?;
            let report = cached_report(&spec, cli, &mut cache)?;
            cache.flush()?;
            emit_report(&report, format(Format::Json))
        }
        Command::Verify { suites, all_checks } => cmd_verify(cli, suites, *all_checks, format(Format::Json)),
        Command::Scan {
            pattern,
            params,
            outputs,
            max_specs,
        } => {
            let outputs = if outputs.is_empty() { &ALL_OUTPUTS[..] } else { &outputs[..] };
            cmd_scan(cli, pattern, params, outputs, *max_specs, format(Format::Json))
        }
        Command::Density {
            target,
            tolerance,
            steps,
        } => cmd_density(cli, target, tolerance.as_deref(), *steps, format(Format::Csv)),
        Command::Import { path, label } => {
            let text = std::fs::read_to_string(path)?;
            let rows = parse_cayley_text(&text)?;
            let label = label.clone().unwrap_or_else(|| {
                path.file_stem()
                    .map_or_else(|| "imported".into(), |s| s.to_string_lossy().into_owned())
            });
            let g = make_group_capped(&rows, cli.order_cap)?.with_label(label);
            emit_report(&compute_report(&g, cli)?, format(Format::Json))
        }
        Command::Lattice { spec } => {
            let spec: FamilySpec = spec.parse()?;
            let g = spec.build_capped(cli.order_cap)?;
            let l = all_subgroups_capped(&g, cli.order_cap)?;
            emit_lattice(&g, &l.dump(), format(Format::Json))
        }
    }
}

fn compute_report(g: &FiniteGroup, cli: &Cli) -> CliResult<DegreeReport> {
    let l = all_subgroups_capped(g, cli.order_cap)?;
    let d = if cli.full_f_check {
        Degrees::new_verified(g, &l)?
    } else {
        Degrees::new(g, &l)
    };
    Ok(d.report())
}

/// A full check always recomputes, since the class check is its purpose.
fn cached_report(spec: &FamilySpec, cli: &Cli, cache: &mut Cache) -> CliResult<DegreeReport> {
    let key = spec.to_string();
    if !cli.full_f_check {
        if let Some(r) = cache.get(&key) {
            return Ok(r.clone());
        }
    }
    let report = compute_report(&spec.build_capped(cli.order_cap)?, cli)?;
    cache.insert(key, report.clone());
    Ok(report)
}

fn write_json<T: Serialize>(value: &T) -> CliResult<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn csv_writer() -> csv::Writer<io::StdoutLock<'static>> {
    csv::Writer::from_writer(io::stdout().lock())
}

fn report_header(outputs: &[Output]) -> Vec<&'static str> {
    let mut h = vec!["label", "order", "lattice_size", "normal_count"];
    for o in outputs {
        h.extend_from_slice(match o {
            Output::Sd => &["sd_num", "sd_den"][..],
            Output::Imf => &["imf_size", "f_image", "iwasawa", "in_class_C"][..],
            Output::Gamma => &["gamma"][..],
            Output::Criterion31 => &["crit_lhs_num", "crit_lhs_den", "crit_rhs_num", "crit_rhs_den", "crit_fires"][..],
        });
    }
    h
}

fn report_fields(r: &DegreeReport, outputs: &[Output]) -> Vec<String> {
    let mut v = vec![
        r.label.clone(),
        r.order.to_string(),
        r.lattice_size.to_string(),
        r.normal_count.to_string(),
    ];
    for o in outputs {
        match o {
            Output::Sd => v.extend([r.sd.numer().to_string(), r.sd.denom().to_string()]),
            Output::Imf => v.extend([
                r.f_image.len().to_string(),
                r.f_image.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
                r.iwasawa.to_string(),
                r.in_class_c.to_string(),
            ]),
            Output::Gamma => v.push(r.gamma.to_string()),
            Output::Criterion31 => {
                let c = &r.criterion31;
                v.extend([
                    c.lhs.numer().to_string(),
                    c.lhs.denom().to_string(),
                    c.rhs.numer().to_string(),
                    c.rhs.denom().to_string(),
                    c.fires.to_string(),
                ]);
            }
        }
    }
    v
}

fn emit_report(r: &DegreeReport, format: Format) -> CliResult<()> {
    match format {
        Format::Json => write_json(r),
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(report_header(&ALL_OUTPUTS))?;
            w.write_record(report_fields(r, &ALL_OUTPUTS))?;
            Ok(w.flush()?)
        }
    }
}

#[derive(Serialize)]
struct LatticeDump<'a> {
    schema: u32,
    label: &'a str,
    order: usize,
    lattice_size: usize,
    subgroups: &'a [LatticeEntry],
}

fn emit_lattice(g: &FiniteGroup, entries: &[LatticeEntry], format: Format) -> CliResult<()> {
    match format {
        Format::Json => write_json(&LatticeDump {
            schema: REPORT_SCHEMA,
            label: g.label(),
            order: g.order(),
            lattice_size: entries.len(),
            subgroups: entries,
        }),
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["index", "size", "members", "normal", "class_id"])?;
            for (i, e) in entries.iter().enumerate() {
                let members = e.members.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" ");
                w.write_record([i.to_string(), e.size.to_string(), members, e.normal.to_string(), e.class_id.to_string()])?;
            }
            Ok(w.flush()?)
        }
    }
}

#[derive(Serialize)]
struct SuiteSummary<'a> {
    suite: &'a str,
    passed: bool,
    total: usize,
    failed: usize,
    failures: Vec<&'a Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    checks: Option<&'a [Check]>,
    discrepancies: &'a [latcom_core::analytic::FormulaDiscrepancy],
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    schema: u32,
    passed: bool,
    suites: Vec<SuiteSummary<'a>>,
}

fn cmd_verify(cli: &Cli, names: &[String], all_checks: bool, format: Format) -> CliResult<()> {
    let mut selected: Vec<&str> = Vec::new();
    for n in names {
        if n == "all" {
            selected.extend(SUITES);
        } else if SUITES.contains(&n.as_str()) {
            selected.push(n);
        } else {
            return Err(Error::UnknownSuite(n.clone()).into());
        }
    }
    let opts = VerifyOptions {
        order_cap: cli.order_cap,
        full_f_check: cli.full_f_check,
    };
    let outcomes: Vec<SuiteOutcome> = selected
        .iter()
        .map(|s| run_suite(s, &opts))
        .collect::<latcom_core::Result<_>>()?;
    for o in &outcomes {
        let failed = o.failures().count();
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        eprintln!("{}: {verdict} ({}/{} checks)", o.suite, o.checks.len() - failed, o.checks.len());
    }
    let passed = outcomes.iter().all(|o| o.passed);
    match format {
        Format::Json => write_json(&VerifyOutput {
            schema: REPORT_SCHEMA,
            passed,
            suites: outcomes
                .iter()
                .map(|o| SuiteSummary {
                    suite: &o.suite,
                    passed: o.passed,
                    total: o.checks.len(),
                    failed: o.failures().count(),
                    failures: o.failures().collect(),
                    checks: all_checks.then_some(&o.checks[..]),
                    discrepancies: &o.discrepancies,
                })
                .collect(),
        })?,
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["suite", "check", "passed", "detail"])?;
            for o in &outcomes {
                for c in o.checks.iter().filter(|c| all_checks || !c.passed) {
                    w.write_record([o.suite.as_str(), &c.name, &c.passed.to_string(), &c.detail])?;
                }
            }
            w.flush()?;
        }
    }
    if passed {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}

#[derive(Serialize)]
struct ScanRow {
    params: BTreeMap<String, i64>,
    spec: Option<String>,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    values: Option<ScanValues>,
}

#[derive(Serialize)]
struct ScanValues {
    order: usize,
    lattice_size: usize,
    normal_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    sd: Option<ExactRational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    f_image: Option<Vec<ExactRational>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    imf_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iwasawa: Option<bool>,
    #[serde(rename = "in_class_C", skip_serializing_if = "Option::is_none")]
    in_class_c: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    criterion31: Option<Criterion31>,
}

impl ScanValues {
    fn select(r: &DegreeReport, outputs: &[Output]) -> Self {
        let has = |o| outputs.contains(&o);
        let imf = has(Output::Imf);
        ScanValues {
            order: r.order,
            lattice_size: r.lattice_size,
            normal_count: r.normal_count,
            sd: has(Output::Sd).then(|| r.sd.clone()),
            f_image: imf.then(|| r.f_image.clone()),
            imf_size: imf.then_some(r.f_image.len()),
            iwasawa: imf.then_some(r.iwasawa),
            in_class_c: imf.then_some(r.in_class_c),
            gamma: has(Output::Gamma).then_some(r.gamma),
            criterion31: has(Output::Criterion31).then(|| r.criterion31.clone()),
        }
    }
}

#[derive(Serialize)]
struct ScanOutput<'a> {
    schema: u32,
    pattern: &'a str,
    rows: Vec<ScanRow>,
}

fn cmd_scan(
    cli: &Cli,
    pattern: &str,
    params: &[String],
    outputs: &[Output],
    max_specs: usize,
    format: Format,
) -> CliResult<()> {
    let params = params
        .iter()
        .map(|p| parse_param(p))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::Usage)?;
    let points = expand(pattern, &params, max_specs).map_err(|e| match e {
        ExpandError::Pattern(m) => CliError::Usage(m),
        ExpandError::TooMany { count, cap } => {
            CliError::Cap(format!("{count} grid points exceed the job cap of {cap}"))
        }
    })?;
    let mut cache = Cache::open(cli.cache.as_deref())?;
    let computed: Vec<Option<Result<(DegreeReport, bool), String>>> = points
        .par_iter()
        .map(|p| {
            let spec = p.spec.as_ref().ok()?;
            let key = spec.to_string();
            if !cli.full_f_check {
                if let Some(r) = cache.get(&key) {
                    return Some(Ok((r.clone(), false)));
                }
            }
            Some(match spec.build_capped(cli.order_cap).map_err(CliError::from).and_then(|g| compute_report(&g, cli)) {
                Ok(r) => Ok((r, true)),
                Err(CliError::Core(e @ Error::ClassConstancyViolation(..))) => Err(format!("fatal: {e}")),
                Err(e) => Err(e.to_string()),
            })
        })
        .collect();
    let mut rows = Vec::with_capacity(points.len());
    let mut reports = Vec::with_capacity(points.len());
    for (p, result) in points.iter().zip(computed) {
        let params: BTreeMap<String, i64> = p.bindings.iter().cloned().collect();
        let spec = p.spec.as_ref().map(|s| s.to_string()).ok().or_else(|| p.text.clone());
        let row = match (&p.spec, result) {
            (Err(reason), _) => ScanRow {
                params,
                spec,
                status: "skipped",
                reason: Some(reason.clone()),
                values: None,
            },
            (Ok(_), Some(Err(reason))) => {
                if reason.starts_with("fatal: ") {
                    return Err(CliError::Failed);
                }
                ScanRow {
                    params,
                    spec,
                    status: "skipped",
                    reason: Some(reason),
                    values: None,
                }
            }
            (Ok(s), Some(Ok((report, fresh)))) => {
                if fresh {
                    cache.insert(s.to_string(), report.clone());
                }
                let row = ScanRow {
                    params,
                    spec,
                    status: "ok",
                    reason: None,
                    values: Some(ScanValues::select(&report, outputs)),
                };
                reports.push(Some(report));
                rows.push(row);
                continue;
            }
            (Ok(_), None) => unreachable!("valid specs are always computed"),
        };
        reports.push(None);
        rows.push(row);
    }
    cache.flush()?;
    match format {
        Format::Json => write_json(&ScanOutput {
            schema: REPORT_SCHEMA,
            pattern,
            rows,
        }),
        Format::Csv => {
            let mut w = csv_writer();
            let names: Vec<String> = params.iter().map(|p| p.name.clone()).collect();
            let mut header: Vec<String> = names.clone();
            header.extend(["spec", "status", "reason"].map(String::from));
            header.extend(report_header(outputs).into_iter().skip(1).map(String::from));
            w.write_record(&header)?;
            let blanks = header.len() - names.len() - 3;
            for ((row, point), report) in rows.iter().zip(&points).zip(&reports) {
                let mut rec: Vec<String> = point.bindings.iter().map(|b| b.1.to_string()).collect();
                rec.push(row.spec.clone().unwrap_or_default());
                rec.push(row.status.to_string());
                rec.push(row.reason.clone().unwrap_or_default());
                match report {
                    Some(r) => rec.extend(report_fields(r, outputs).into_iter().skip(1)),
                    None => rec.extend(std::iter::repeat_n(String::new(), blanks)),
                }
                w.write_record(&rec)?;
            }
            Ok(w.flush()?)
        }
    }
}

/// `a/b`, an integer, or a decimal such as `0.01`.
fn parse_rational(s: &str) -> Result<ExactRational, String> {
    let s = s.trim();
    if s.contains('/') {
        return s.parse().map_err(|e| format!("{s:?}: {e}"));
    }
    let bad = || format!("{s:?} is not a rational number");
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() || !format!("{int}{frac}").chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let scale = format!("1{}", "0".repeat(frac.len()));
    format!("{int}{frac}/{scale}").parse().map_err(|_| bad())
}

fn parse_target(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once('/').unwrap_or((s, "1"));
    let a: u64 = a.trim().parse().map_err(|_| format!("bad target {s:?}"))?;
    let b: u64 = b.trim().parse().map_err(|_| format!("bad target {s:?}"))?;
    if b == 0 || a > b {
        return Err(format!("target {s:?} must lie in [0, 1]"));
    }
    Ok((a, b))
}

#[derive(Serialize)]
struct SmallestInstance {
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<latcom_core::density::InstanceCheck>,
}

#[derive(Serialize)]
struct DensityOutput<'a> {
    schema: u32,
    target: ExactRational,
    rows: &'a [DensityPlan],
    smallest_instance: SmallestInstance,
}

#[derive(Serialize)]
struct EdgeRow {
    step: usize,
    group: String,
    achieved: ExactRational,
    error: ExactRational,
}

fn cmd_density(cli: &Cli, target: &str, tolerance: Option<&str>, steps: usize, format: Format) -> CliResult<()> {
    let (a, b) = parse_target(target).map_err(CliError::Usage)?;
    let tol = tolerance.map(parse_rational).transpose().map_err(CliError::Usage)?;
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    if a == 0 || a == b {
        return density_edge(a == 0, tol.as_ref(), steps, format);
    }
    let rows = match &tol {
        Some(t) => converge_to_tolerance(a, b, t, 64)?,
        None => convergence_table(a, b, steps)?,
    };
    if let Some(t) = &tol {
        if rows.last().is_none_or(|r| &r.error >= t) {
            return Err(CliError::Cap(format!("tolerance {t} not reached within 64 doublings")));
        }
    }
    match format {
        Format::Json => {
            let smallest = match verify_smallest_instance_capped(&build_plan(a, b, 3)?, cli.order_cap) {
                Ok(check) => SmallestInstance {
                    status: if check.equal { "verified" } else { "mismatch" }.into(),
                    check: Some(check),
                },
                Err(Error::OrderCapExceeded { order, cap }) => SmallestInstance {
                    status: format!("formula only: order {order} exceeds the cap of {cap}"),
                    check: None,
                },
                Err(e) => return Err(e.into()),
            };
            let mismatch = smallest.check.as_ref().is_some_and(|c| !c.equal);
            write_json(&DensityOutput {
                schema: REPORT_SCHEMA,
                target: ExactRational::new(a, b),
                rows: &rows,
                smallest_instance: smallest,
            })?;
            if mismatch {
                return Err(CliError::Failed);
            }
            Ok(())
        }
        Format::Csv => {
            let mut w = csv_writer();
            let mut header = vec!["min_p".to_string()];
            for j in 1..=rows[0].factors.len() {
                header.extend([format!("q{j}"), format!("n{j}"), format!("p{j}")]);
            }
            header.extend(["achieved_num", "achieved_den", "error_num", "error_den"].map(String::from));
            w.write_record(&header)?;
            for r in &rows {
                let mut rec = vec![r.min_p.to_string()];
                for f in &r.factors {
                    rec.extend([f.q.to_string(), f.n.to_string(), f.p.to_string()]);
                }
                rec.extend([
                    r.achieved.numer().to_string(),
                    r.achieved.denom().to_string(),
                    r.error.numer().to_string(),
                    r.error.denom().to_string(),
                ]);
                w.write_record(&rec)?;
            }
            Ok(w.flush()?)
        }
    }
}

/// Target 0 follows `sd(D_{2^n})`; target 1 is attained by the trivial group.
fn density_edge(zero: bool, tol: Option<&ExactRational>, steps: usize, format: Format) -> CliResult<()> {
    let rows: Vec<EdgeRow> = if zero {
        let limit = if tol.is_some() { 4096 } else { steps };
        let mut rows = Vec::new();
        for (i, (n, value)) in zero_target_table(limit).into_iter().enumerate() {
            let done = tol.is_some_and(|t| &value < t);
            rows.push(EdgeRow {
                step: i + 1,
                group: FamilySpec::Dihedral(1 << (n - 1)).to_string(),
                error: value.clone(),
                achieved: value,
            });
            if done {
                break;
            }
        }
        rows
    } else {
        vec![EdgeRow {
            step: 1,
            group: "Z(1)".into(),
            achieved: ExactRational::one(),
            error: ExactRational::zero(),
        }]
    };
    match format {
        Format::Json => write_json(&serde_json::json!({
            "schema": REPORT_SCHEMA,
            "target": ExactRational::from_integer(if zero { 0 } else { 1 }),
            "rows": rows,
        })),
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["step", "group", "achieved_num", "achieved_den", "error_num", "error_den"])?;
            for r in &rows {
                w.write_record([
                    r.step.to_string(),
                    r.group.clone(),
                    r.achieved.numer().to_string(),
                    r.achieved.denom().to_string(),
                    r.error.numer().to_string(),
                    r.error.denom().to_string(),
                ])?;
            }
            Ok(w.flush()?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/100").unwrap(), ExactRational::new(1, 100));
        assert_eq!(parse_rational("0.01").unwrap(), ExactRational::new(1, 100));
        assert_eq!(parse_rational(".5").unwrap(), ExactRational::new(1, 2));
        assert_eq!(parse_rational("2").unwrap(), ExactRational::from_integer(2));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
        assert!(parse_rational("-1").is_err());
    }

    #[test]
    fn targets() {
        assert_eq!(parse_target("2/4"), Ok((2, 4)));
        assert_eq!(parse_target("0"), Ok((0, 1)));
        assert_eq!(parse_target("1"), Ok((1, 1)));
        assert!(parse_target("3/2").is_err());
        assert!(parse_target("1/0").is_err());
    }
}
