//! Command-line front end.
//!
//! Every subcommand builds a [`Table`] and renders it as CSV or JSON. Numbers
//! are written with 17 significant digits (`{:.16e}`), so identical inputs
//! give byte-identical output.
//!
//! CSV dialect: comma separated, `#` starts a comment line, the first
//! non-comment line is the column header. Footer records are comment lines
//! of the form `# key=value`.
//!
//! Settings are resolved as flag, then `--config` file (`key=value` lines,
//! keys named like the long flags), then built-in default.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Number, Value};

use crate::error::Error;
use crate::expfam::{border_pol_expectation, build_triple_table, count_table, polytope_points};
use crate::flow::{find_fixed_points, grid_seeds, integrate, FlowSettings, NewtonSettings, TerminalReason};
use crate::indices::{cubic_conditions, CubicIndexCoeffs, Index};
use crate::natgrad::VectorField;
use crate::replicator::{integrate_replicator, lv_conserved, lv_downlift, lv_uplift, Chart, Fitness, LvParams};
use crate::simplex::{EtaCoords, SimplexPoint};
use crate::timeseries::{analyze_series, DistributionSeries};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_NO_CONVERGENCE: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => EXIT_INPUT,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::NoConvergence(_) => EXIT_NO_CONVERGENCE,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::InvalidStep(_) | Error::DimensionMismatch { .. } => {
                CliError::Input(e.to_string())
            }
            Error::NoConvergence(_) => CliError::NoConvergence(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Input(format!("unknown format '{other}'"))),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "polflow", version, about = "Natural-gradient flow of the polarization index on the simplex")]
pub struct Cli {
    /// Output format [csv, json]
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Write output to PATH instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Start the output with a version comment line
    #[arg(long, global = true)]
    pub header: bool,
    /// key=value settings file; flags take precedence
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an index at points of the closed simplex
    Eval(EvalArgs),
    /// Sample the natural-gradient field on a grid (n = 2)
    Field(FieldArgs),
    /// Integrate the natural-gradient flow from a start point
    Flow(FlowArgs),
    /// Locate and classify fixed points of the natural-gradient field (n = 2)
    Fixedpoints(FixedPointArgs),
    /// Exponential-family tables for three draws
    Expfam(ExpfamArgs),
    /// Lotka-Volterra replicator trajectory in a chosen chart
    Replicator(ReplicatorArgs),
    /// Velocity and gradient alignment along a series of distributions
    Series(SeriesArgs),
}

#[derive(Debug, Args)]
pub struct IndexArg {
    /// pol or cubic:a,b,c,d,e
    #[arg(long)]
    pub index: Option<String>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub index: IndexArg,
    /// Inline point η₁,…,ηₙ (repeatable)
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Vec<String>,
    /// CSV file of η rows
    #[arg(long, value_name = "PATH")]
    pub points: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[command(flatten)]
    pub index: IndexArg,
    /// Samples per axis
    #[arg(long)]
    pub grid: Option<String>,
    /// Axis range lo,hi
    #[arg(long, allow_hyphen_values = true)]
    pub extent: Option<String>,
    /// Emit the Euclidean gradient instead of the natural gradient
    #[arg(long)]
    pub euclidean: bool,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[command(flatten)]
    pub index: IndexArg,
    /// Start point η₁,…,ηₙ
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<String>,
    #[arg(long)]
    pub dt: Option<String>,
    #[arg(long)]
    pub tmax: Option<String>,
    /// Field norm below which the flow counts as converged
    #[arg(long)]
    pub tol: Option<String>,
}

#[derive(Debug, Args)]
pub struct FixedPointArgs {
    #[command(flatten)]
    pub index: IndexArg,
    /// Newton seeds per axis
    #[arg(long)]
    pub grid: Option<String>,
    /// Seed range lo,hi
    #[arg(long, allow_hyphen_values = true)]
    pub extent: Option<String>,
    /// Residual tolerance
    #[arg(long)]
    pub tol: Option<String>,
    /// Keep roots outside the closed simplex
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExpfamTable {
    Triples,
    Counts,
    Border,
}

#[derive(Debug, Args)]
pub struct ExpfamArgs {
    #[arg(long, value_enum)]
    pub table: Option<ExpfamTable>,
}

#[derive(Debug, Args)]
pub struct ReplicatorArgs {
    /// Growth rates α₁,α₂
    #[arg(long)]
    pub alpha: Option<String>,
    /// solid, exp or proj
    #[arg(long)]
    pub chart: Option<String>,
    /// Start distribution π₀,π₁,π₂
    #[arg(long)]
    pub start: Option<String>,
    /// Start populations z₁,z₂
    #[arg(long = "start-z")]
    pub start_z: Option<String>,
    #[arg(long)]
    pub dt: Option<String>,
    #[arg(long)]
    pub tmax: Option<String>,
    /// Emit every k-th step
    #[arg(long)]
    pub every: Option<String>,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[command(flatten)]
    pub index: IndexArg,
    /// CSV with a label column followed by probabilities; '-' for stdin
    #[arg(long, value_name = "PATH")]
    pub input: Option<String>,
}

/// Settings read from a `--config` file.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Input(format!("config line {}: expected key=value", k + 1)))?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

/// Resolved global settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub header: bool,
    pub file: ConfigFile,
}

impl RunConfig {
    fn setting(&self, flag: &Option<String>, key: &str) -> Option<String> {
        flag.clone().or_else(|| self.file.get(key).map(str::to_string))
    }

    fn switch(&self, flag: bool, key: &str) -> CliResult<bool> {
        if flag {
            return Ok(true);
        }
        match self.file.get(key) {
            None => Ok(false),
            Some(v) => parse_bool(key, v),
        }
    }

    fn parsed<T: FromStr>(&self, flag: &Option<String>, key: &str, default: T) -> CliResult<T> {
        match self.setting(flag, key) {
            Some(s) => s.trim().parse().map_err(|_| CliError::Input(format!("--{key}: cannot parse '{s}'"))),
            None => Ok(default),
        }
    }

    fn index(&self, arg: &IndexArg) -> CliResult<Index> {
        parse_index(&self.setting(&arg.index, "index").unwrap_or_else(|| "pol".into()))
    }
}

fn parse_bool(key: &str, v: &str) -> CliResult<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(CliError::Input(format!("{key}: expected true or false, got '{other}'"))),
    }
}

/// `pol` or `cubic:a,b,c,d,e`.
pub fn parse_index(s: &str) -> CliResult<Index> {
    let s = s.trim();
    if s == "pol" {
        return Ok(Index::Pol);
    }
    let Some(rest) = s.strip_prefix("cubic:") else {
        return Err(CliError::Input(format!("unknown index '{s}' (expected pol or cubic:a,b,c,d,e)")));
    };
    match parse_list("index", rest)?.as_slice() {
        &[a, b, c, d, e] => Ok(Index::Cubic(CubicIndexCoeffs::new(a, b, c, d, e))),
        v => Err(CliError::Input(format!("cubic index needs 5 coefficients, got {}", v.len()))),
    }
}

/// Comma-separated finite reals.
pub fn parse_list(what: &str, s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Input(format!("{what}: cannot parse '{t}' as a number")))
        })
        .collect()
}

fn parse_pair(what: &str, s: &str) -> CliResult<[f64; 2]> {
    match parse_list(what, s)?.as_slice() {
        &[a, b] => Ok([a, b]),
        v => Err(CliError::Input(format!("{what}: expected 2 values, got {}", v.len()))),
    }
}

/// Data rows with their 1-based line numbers.
pub type CsvRows = Vec<(usize, Vec<String>)>;

/// Header and data lines of a CSV file.
pub fn read_csv(text: &str) -> CliResult<(Vec<String>, CsvRows)> {
    let mut lines =
        text.lines().enumerate().map(|(k, l)| (k + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines.next().ok_or_else(|| CliError::Input("input has no header line".into()))?;
    let split = |l: &str| l.split(',').map(|c| c.trim().to_string()).collect::<Vec<_>>();
    let header = split(header);
    let rows = lines.map(|(k, l)| (k, split(l))).collect();
    Ok((header, rows))
}

fn numeric_row(line: usize, cells: &[String]) -> CliResult<Vec<f64>> {
    cells
        .iter()
        .map(|c| {
            c.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Input(format!("line {line}: cannot parse '{c}' as a number")))
        })
        .collect()
}

/// One output value.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Missing,
}

/// 17 significant digits in scientific notation; `-0` prints as `0`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        let x = if x == 0.0 { 0.0 } else { x };
        format!("{x:.16e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => {
                Value::Number(Number::from_str(&format_number(*x)).expect("formatted float is valid JSON"))
            }
            Cell::Num(_) | Cell::Missing => Value::Null,
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

/// Output of a subcommand.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// `key=value` records written after the rows.
    pub footer: Vec<(String, String)>,
}

impl Table {
    fn new(columns: Vec<String>) -> Self {
        Self { columns, ..Default::default() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn note(&mut self, key: &str, value: impl Into<String>) {
        self.footer.push((key.to_string(), value.into()));
    }

    pub fn render(&self, format: Format, banner: Option<&str>) -> String {
        match format {
            Format::Csv => {
                let mut out = String::new();
                if let Some(b) = banner {
                    out.push_str(&format!("# {b}\n"));
                }
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
                    out.push('\n');
                }
                for (k, v) in &self.footer {
                    out.push_str(&format!("# {k}={v}\n"));
                }
                out
            }
            Format::Json => {
                let mut doc = serde_json::Map::new();
                if let Some(b) = banner {
                    doc.insert("version".into(), json!(b));
                }
                doc.insert("columns".into(), json!(self.columns));
                let rows: Vec<Value> =
                    self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
                doc.insert("rows".into(), Value::Array(rows));
                let footer: serde_json::Map<String, Value> =
                    self.footer.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
                doc.insert("footer".into(), Value::Object(footer));
                let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}

/// A finished subcommand: its table, exit status and messages for stderr.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: Table,
    pub status: i32,
    pub warnings: Vec<String>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Self { table, status: EXIT_OK, warnings: Vec::new() }
    }
}

fn nums(values: impl IntoIterator<Item = f64>) -> Vec<Cell> {
    values.into_iter().map(Cell::Num).collect()
}

fn names(prefix: &str, range: std::ops::Range<usize>) -> Vec<String> {
    range.map(|k| format!("{prefix}{k}")).collect()
}

fn require_positive(key: &str, v: f64) -> CliResult<f64> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Input(format!("--{key} must be positive, got {v}")))
    }
}

fn require_dt(v: f64) -> CliResult<f64> {
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(CliError::Input(format!("--dt must be in (0, 1], got {v}")))
    }
}

fn require_grid(key: &str, v: usize) -> CliResult<usize> {
    if v >= 2 {
        Ok(v)
    } else {
        Err(CliError::Input(format!("--{key} must be at least 2, got {v}")))
    }
}

fn extent(cfg: &RunConfig, flag: &Option<String>) -> CliResult<(f64, f64)> {
    let [lo, hi] = parse_pair("extent", &cfg.setting(flag, "extent").unwrap_or_else(|| "0,1".into()))?;
    if lo < hi {
        Ok((lo, hi))
    } else {
        Err(CliError::Input(format!("--extent needs lo < hi, got {lo},{hi}")))
    }
}

fn axis(lo: f64, hi: f64, count: usize, k: usize) -> f64 {
    lo + (hi - lo) * k as f64 / (count - 1) as f64
}

pub fn cmd_eval(cfg: &RunConfig, args: &EvalArgs) -> CliResult<Outcome> {
    let index = cfg.index(&args.index)?;
    let mut points: Vec<(String, Vec<f64>)> = Vec::new();
    let inline: Vec<String> = if args.eta.is_empty() {
        cfg.file.get("eta").map(|s| vec![s.to_string()]).unwrap_or_default()
    } else {
        args.eta.clone()
    };
    for (k, s) in inline.iter().enumerate() {
        points.push((format!("--eta #{}", k + 1), parse_list(&format!("--eta #{}", k + 1), s)?));
    }
    if let Some(path) = cfg.setting(&args.points.as_ref().map(|p| p.display().to_string()), "points") {
        let text = fs::read_to_string(&path).map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?;
        let (_, rows) = read_csv(&text)?;
        for (line, cells) in rows {
            points.push((format!("line {line}"), numeric_row(line, &cells)?));
        }
    }
    if points.is_empty() {
        return Err(CliError::Input("no points given (use --eta or --points)".into()));
    }
    let n = points[0].1.len();
    if n == 0 {
        return Err(CliError::Input("points need at least one coordinate".into()));
    }
    let mut columns = names("eta", 1..n + 1);
    columns.extend(names("pi", 0..n + 1));
    columns.push("value".into());
    let mut table = Table::new(columns);
    for (origin, eta) in points {
        if eta.len() != n {
            return Err(CliError::Input(format!("{origin}: expected {n} coordinates, got {}", eta.len())));
        }
        if !EtaCoords::extended(eta.clone()).in_closed_simplex(1e-12) {
            return Err(CliError::Domain(format!("{origin}: {eta:?} is outside the closed simplex")));
        }
        let mut probs = vec![1.0 - eta.iter().sum::<f64>()];
        probs.extend(&eta);
        let value = index.value_probs(&probs).map_err(|e| CliError::Domain(format!("{origin}: {e}")))?;
        let mut row = nums(eta);
        row.extend(nums(probs));
        row.push(Cell::Num(value));
        table.push(row);
    }
    Ok(table.into())
}

pub fn cmd_field(cfg: &RunConfig, args: &FieldArgs) -> CliResult<Outcome> {
    let index = cfg.index(&args.index)?;
    let grid = require_grid("grid", cfg.parsed(&args.grid, "grid", 21usize)?)?;
    let (lo, hi) = extent(cfg, &args.extent)?;
    let euclidean = cfg.switch(args.euclidean, "euclidean")?;
    let field = if euclidean {
        VectorField::euclidean_gradient_of(index, 2)?
    } else {
        VectorField::natural_gradient_of(index, 2)?
    };
    let mut table = Table::new(["eta1", "eta2", "g1", "g2", "norm"].map(String::from).to_vec());
    for i in 0..grid {
        for j in 0..grid {
            let p = [axis(lo, hi, grid, i), axis(lo, hi, grid, j)];
            let g = field.eval(&p);
            table.push(nums([p[0], p[1], g[0], g[1], g[0].hypot(g[1])]));
        }
    }
    table.note("field", if euclidean { "euclidean" } else { "natural" });
    table.note("index", index.label());
    Ok(table.into())
}

pub fn cmd_flow(cfg: &RunConfig, args: &FlowArgs) -> CliResult<Outcome> {
    let index = cfg.index(&args.index)?;
    let start = cfg.setting(&args.start, "start").ok_or_else(|| CliError::Input("--start is required".into()))?;
    let start = parse_list("start", &start)?;
    let settings = FlowSettings {
        dt: require_dt(cfg.parsed(&args.dt, "dt", 0.1)?)?,
        t_max: require_positive("tmax", cfg.parsed(&args.tmax, "tmax", 500.0)?)?,
        stop_tol: require_positive("tol", cfg.parsed(&args.tol, "tol", 1e-10)?)?,
    };
    let n = start.len();
    let field = VectorField::natural_gradient_of(index, n)?;
    let traj = integrate(&field, &EtaCoords::extended(start), settings)?;
    let mut columns = vec!["t".to_string()];
    columns.extend(names("eta", 1..n + 1));
    columns.extend(["value".to_string(), "norm".to_string()]);
    let mut table = Table::new(columns);
    for k in 0..traj.len() {
        let mut row = vec![Cell::Num(traj.times[k])];
        row.extend(nums(traj.states[k].iter().copied()));
        row.push(Cell::Num(traj.values[k]));
        row.push(Cell::Num(traj.field_norms[k]));
        table.push(row);
    }
    table.note("terminal_reason", traj.terminal_reason.as_str());
    let status = if traj.terminal_reason == TerminalReason::Converged { EXIT_OK } else { EXIT_NO_CONVERGENCE };
    let mut warnings = Vec::new();
    if status != EXIT_OK {
        warnings.push(format!("flow stopped without converging ({})", traj.terminal_reason.as_str()));
    }
    Ok(Outcome { table, status, warnings })
}

pub fn cmd_fixedpoints(cfg: &RunConfig, args: &FixedPointArgs) -> CliResult<Outcome> {
    let index = cfg.index(&args.index)?;
    let grid = require_grid("grid", cfg.parsed(&args.grid, "grid", 7usize)?)?;
    let (lo, hi) = extent(cfg, &args.extent)?;
    let tol = require_positive("tol", cfg.parsed(&args.tol, "tol", 1e-10)?)?;
    let settings =
        NewtonSettings { tol, restrict_to_simplex: !cfg.switch(args.all, "all")?, ..NewtonSettings::default() };
    let field = VectorField::natural_gradient_of(index, 2)?;
    let search = find_fixed_points(&field, &grid_seeds(grid, lo, hi), &settings);
    let mut table = Table::new(
        ["eta1", "eta2", "residual", "re1", "im1", "re2", "im2", "classification"].map(String::from).to_vec(),
    );
    for p in &search.points {
        let mut row = nums([p.location[0], p.location[1], p.residual]);
        for l in &p.eigenvalues {
            row.extend(nums([l.re, l.im]));
        }
        row.push(Cell::Text(p.classification.as_str().into()));
        table.push(row);
    }
    table.note("index", index.label());
    if let Index::Cubic(k) = index {
        let c = cubic_conditions(&k);
        table.note("nondefinite", c.nondefinite.to_string());
        table.note("attracting", c.attracting.to_string());
    }
    table.note("failed_seeds", search.failures.len().to_string());
    if search.points.is_empty() {
        return Ok(Outcome {
            table,
            status: EXIT_NO_CONVERGENCE,
            warnings: vec!["no fixed point found from any seed".into()],
        });
    }
    Ok(table.into())
}

pub fn cmd_expfam(cfg: &RunConfig, args: &ExpfamArgs) -> CliResult<Outcome> {
    let which = match (args.table, cfg.file.get("table")) {
        (Some(t), _) => t,
        (None, Some(s)) => ExpfamTable::from_str(s, false).map_err(CliError::Input)?,
        (None, None) => ExpfamTable::Counts,
    };
    let table = match which {
        ExpfamTable::Triples => {
            let cols = ["row", "x", "y", "z", "x1", "y1", "z1", "x2", "y2", "z2", "t1", "t2", "polarized"];
            let mut t = Table::new(cols.map(String::from).to_vec());
            for (k, r) in build_triple_table().rows.iter().enumerate() {
                let mut row = vec![Cell::Int(k as i64 + 1)];
                row.extend(r.draws.iter().chain(&r.ones).chain(&r.twos).map(|&v| Cell::Int(v.into())));
                row.extend([Cell::Int(r.t1.into()), Cell::Int(r.t2.into()), Cell::Int(r.polarized.into())]);
                t.push(row);
            }
            t
        }
        ExpfamTable::Counts => {
            let f = count_table();
            let mut t = Table::new(["t1", "t2", "count"].map(String::from).to_vec());
            for t1 in 0..4 {
                for t2 in 0..4 {
                    t.push(vec![Cell::Int(t1 as i64), Cell::Int(t2 as i64), Cell::Int(f.get(t1, t2).into())]);
                }
            }
            t
        }
        ExpfamTable::Border => {
            let mut t = Table::new(["eta1", "eta2", "expectation"].map(String::from).to_vec());
            for e in [[0.0, 0.5], [0.5, 0.0], [0.5, 0.5]] {
                let v = border_pol_expectation(&EtaCoords::extended(e.to_vec()))?;
                t.push(nums([e[0], e[1], v]));
            }
            t.note("support_points", polytope_points().count().to_string());
            t
        }
    };
    Ok(table.into())
}

pub fn cmd_replicator(cfg: &RunConfig, args: &ReplicatorArgs) -> CliResult<Outcome> {
    let [a1, a2] = parse_pair("alpha", &cfg.setting(&args.alpha, "alpha").unwrap_or_else(|| "1,1".into()))?;
    let params = LvParams::rescaled(a1, a2).map_err(|e| CliError::Input(e.to_string()))?;
    let chart: Chart = cfg.setting(&args.chart, "chart").unwrap_or_else(|| "solid".into()).parse()?;
    let dt = require_dt(cfg.parsed(&args.dt, "dt", 1e-3)?)?;
    let t_max = require_positive("tmax", cfg.parsed(&args.tmax, "tmax", 10.0)?)?;
    let every = cfg.parsed(&args.every, "every", 1usize)?;
    if every == 0 {
        return Err(CliError::Input("--every must be at least 1".into()));
    }
    let start = match (cfg.setting(&args.start, "start"), cfg.setting(&args.start_z, "start-z")) {
        (Some(_), Some(_)) => return Err(CliError::Input("give either --start or --start-z, not both".into())),
        (Some(s), None) => SimplexPoint::new(parse_list("start", &s)?)?,
        (None, Some(s)) => lv_uplift(parse_pair("start-z", &s)?)?,
        (None, None) => return Err(CliError::Input("--start or --start-z is required".into())),
    };
    if start.n() != 2 {
        return Err(CliError::Domain(format!("replicator dynamics need 3 categories, got {}", start.n() + 1)));
    }
    let traj = integrate_replicator(&Fitness::lotka_volterra(params), chart, &start, dt, t_max)?;
    let mut columns = vec!["t".to_string()];
    columns.extend(names(chart.symbol(), 1..3));
    columns.extend(names("pi", 0..3));
    columns.extend(["z1", "z2", "C"].map(String::from));
    let mut table = Table::new(columns);
    let last = traj.times.len() - 1;
    for k in (0..traj.times.len()).filter(|k| k % every == 0 || *k == last) {
        let p = SimplexPoint::new(traj.points[k].clone())?;
        let z = lv_downlift(&p)?;
        let mut row = vec![Cell::Num(traj.times[k])];
        row.extend(nums(traj.states[k].iter().copied()));
        row.extend(nums(p.probs().iter().copied()));
        row.extend(nums([z[0], z[1], lv_conserved(&params, z)?]));
        table.push(row);
    }
    table.note("chart", chart.as_str());
    table.note("terminal_reason", traj.terminal_reason.as_str());
    let status = if traj.terminal_reason == TerminalReason::LeftDomain { EXIT_DOMAIN } else { EXIT_OK };
    Ok(Outcome { table, status, warnings: Vec::new() })
}

pub fn cmd_series(cfg: &RunConfig, args: &SeriesArgs) -> CliResult<Outcome> {
    let index = cfg.index(&args.index)?;
    let input = cfg.setting(&args.input, "input").ok_or_else(|| CliError::Input("--input is required".into()))?;
    let text = if input == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(&input).map_err(|e| CliError::Input(format!("cannot read {input}: {e}")))?
    };
    let (header, rows) = read_csv(&text)?;
    if header.len() < 3 {
        return Err(CliError::Input("series needs a label column and at least 2 probability columns".into()));
    }
    let mut labels = Vec::with_capacity(rows.len());
    let mut values = Vec::with_capacity(rows.len());
    for (line, cells) in rows {
        if cells.len() != header.len() {
            return Err(CliError::Input(format!("line {line}: expected {} fields, got {}", header.len(), cells.len())));
        }
        labels.push(cells[0].clone());
        let v = numeric_row(line, &cells[1..])?;
        if v.iter().any(|x| *x < 0.0) {
            return Err(CliError::Input(format!("line {line}: negative probability")));
        }
        let total: f64 = v.iter().sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(CliError::Input(format!("line {line}: probabilities sum to {total}")));
        }
        values.push(v);
    }
    let series = DistributionSeries::from_rows(labels, values)?;
    let report = analyze_series(&series, &index)?;
    let m = header.len() - 1;
    let mut columns =
        ["from", "to", "value_from", "value_to", "delta", "score", "cosine", "floored"].map(String::from).to_vec();
    columns.extend(names("v", 0..m));
    let mut table = Table::new(columns);
    let mut warnings = Vec::new();
    for s in &report.steps {
        if s.floored {
            warnings.push(format!("step {} -> {}: zero probabilities floored", s.from, s.to));
        }
        let mut row = vec![Cell::Text(s.from.clone()), Cell::Text(s.to.clone())];
        row.extend(nums([s.value_from, s.value_to, s.delta, s.score]));
        row.push(s.cosine.map_or(Cell::Missing, Cell::Num));
        row.push(Cell::Bool(s.floored));
        row.extend(nums(s.velocity.iter().copied()));
        table.push(row);
    }
    table.note("index", report.index);
    Ok(Outcome { table, status: EXIT_OK, warnings })
}

pub fn execute(cli: &Cli) -> CliResult<(Outcome, RunConfig)> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let pre = RunConfig { format: Format::Csv, out: None, header: false, file };
    let format: Format = pre.setting(&cli.format, "format").unwrap_or_else(|| "csv".into()).parse()?;
    let out = cli.out.clone().or_else(|| pre.file.get("out").map(PathBuf::from));
    let header = pre.switch(cli.header, "header")?;
    let cfg = RunConfig { format, out, header, ..pre };
    let outcome = match &cli.command {
        Command::Eval(a) => cmd_eval(&cfg, a)?,
        Command::Field(a) => cmd_field(&cfg, a)?,
        Command::Flow(a) => cmd_flow(&cfg, a)?,
        Command::Fixedpoints(a) => cmd_fixedpoints(&cfg, a)?,
        Command::Expfam(a) => cmd_expfam(&cfg, a)?,
        Command::Replicator(a) => cmd_replicator(&cfg, a)?,
        Command::Series(a) => cmd_series(&cfg, a)?,
    };
    Ok((outcome, cfg))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eval(_) => "eval",
        Command::Field(_) => "field",
        Command::Flow(_) => "flow",
        Command::Fixedpoints(_) => "fixedpoints",
        Command::Expfam(_) => "expfam",
        Command::Replicator(_) => "replicator",
        Command::Series(_) => "series",
    }
}

/// Parses `args`, runs the subcommand and writes its output; returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let (outcome, cfg) = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "polflow: {e}");
            return e.exit_code();
        }
    };
    for w in &outcome.warnings {
        let _ = writeln!(stderr, "polflow: warning: {w}");
    }
    let banner = cfg.header.then(|| format!("polflow {} {}", env!("CARGO_PKG_VERSION"), command_name(&cli.command)));
    let text = outcome.table.render(cfg.format, banner.as_deref());
    let written = match &cfg.out {
        Some(path) => fs::write(path, text),
        None => stdout.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "polflow: cannot write output: {e}");
        return EXIT_INPUT;
    }
    outcome.status
}
