//! Output records and the `frogbound` command-line front end.
//!
//! Each `cmd_*` function returns plain records; [`run`] parses arguments,
//! renders records as CSV or JSON lines and maps failures to exit codes:
//! 0 success, 1 usage error, 2 numeric failure, 3 coupling violation.

use std::ffi::OsString;
use std::fmt;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::branching::{run_coupled, write_trace_csv};
use crate::error::{Error, Result};
use crate::model::{literature_bounds, p_of_r_real, ModelParams};
use crate::renewal::solve_rc;
use crate::sim::{survival_frequency, write_replicas_csv, SimConfig, SimOutcome, Variant};

pub const DEFAULT_DECIMALS: usize = 7;

/// Degrees listed in the published comparison table.
pub const TABLE_DEGREES: [u32; 12] = [2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 50, 100];

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    UInt(u64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl From<u64> for Value {
    fn from(x: u64) -> Self {
        Value::UInt(x)
    }
}

impl From<u32> for Value {
    fn from(x: u32) -> Self {
        Value::UInt(x as u64)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::UInt(x as u64)
    }
}

impl From<i64> for Value {
    fn from(x: i64) -> Self {
        Value::Int(x)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<bool> for Value {
    fn from(x: bool) -> Self {
        Value::Bool(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Self {
        Value::Text(x.to_string())
    }
}

impl From<String> for Value {
    fn from(x: String) -> Self {
        Value::Text(x)
    }
}

/// Fixed-point rendering cut (not rounded) after `decimals` digits, so a
/// printed value `x` means the true value lies in `[x, x + 10^-decimals)`
/// for positive numbers. The cut is applied to the value rounded to 15
/// significant digits, which absorbs representation noise. `None` prints
/// the shortest round-trip form.
pub fn format_float(x: f64, decimals: Option<usize>) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let Some(k) = decimals else {
        let s = x.to_string();
        return if s.contains(['.', 'e', 'E']) { s } else { format!("{s}.0") };
    };
    let sci = format!("{:.14e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("scientific form");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let point = exp.parse::<i64>().expect("exponent") + 1;
    let (int, mut frac) = if x == 0.0 {
        ("0".to_string(), String::new())
    } else if point <= 0 {
        ("0".to_string(), "0".repeat((-point) as usize) + &digits)
    } else if point as usize >= digits.len() {
        (digits.clone() + &"0".repeat(point as usize - digits.len()), String::new())
    } else {
        (digits[..point as usize].to_string(), digits[point as usize..].to_string())
    };
    frac.truncate(k);
    frac.push_str(&"0".repeat(k - frac.len()));
    let zero = int.chars().chain(frac.chars()).all(|c| c == '0');
    let sign = if x < 0.0 && !zero { "-" } else { "" };
    if k == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

impl Value {
    pub fn render(&self, decimals: Option<usize>) -> String {
        match self {
            Value::Int(x) => x.to_string(),
            Value::UInt(x) => x.to_string(),
            Value::Float(x) => format_float(*x, decimals),
            Value::Bool(x) => x.to_string(),
            Value::Text(x) => x.clone(),
        }
    }

    fn render_json(&self, decimals: Option<usize>) -> String {
        match self {
            Value::Float(x) if !x.is_finite() => "null".into(),
            Value::Text(x) => serde_json::to_string(x).expect("strings serialise"),
            v => v.render(decimals),
        }
    }

    /// Inverse of [`Value::render`] up to the printed precision.
    pub fn infer(field: &str) -> Value {
        match field {
            "true" => return Value::Bool(true),
            "false" => return Value::Bool(false),
            _ => {}
        }
        if let Ok(u) = field.parse::<u64>() {
            return Value::UInt(u);
        }
        if let Ok(i) = field.parse::<i64>() {
            return Value::Int(i);
        }
        let numeric = field
            .trim_start_matches('-')
            .starts_with(|c: char| c.is_ascii_digit() || c == 'N' || c == 'i');
        match field.parse::<f64>() {
            Ok(x) if numeric => Value::Float(x),
            _ => Value::Text(field.to_string()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(None))
    }
}

/// One output row: ordered `(key, value)` pairs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputRecord {
    pub fields: Vec<(String, Value)>,
}

impl OutputRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn keys(&self) -> Vec<&str> {
        self.fields.iter().map(|(k, _)| k.as_str()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputOptions {
    pub format: Format,
    pub decimals: Option<usize>,
}

impl Default for OutputOptions {
    fn default() -> Self {
        OutputOptions {
            format: Format::Csv,
            decimals: Some(DEFAULT_DECIMALS),
        }
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Invalid(format!("csv: {e}"))
}

/// Renders records that share one header.
pub fn emit(records: &[OutputRecord], opts: OutputOptions) -> Result<String> {
    match opts.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if let Some(first) = records.first() {
                w.write_record(first.keys()).map_err(csv_error)?;
            }
            for r in records {
                w.write_record(r.fields.iter().map(|(_, v)| v.render(opts.decimals)))
                    .map_err(csv_error)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Invalid(format!("csv: {e}")))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        Format::Json => {
            let mut out = String::new();
            for r in records {
                let body: Vec<String> = r
                    .fields
                    .iter()
                    .map(|(k, v)| {
                        let key = serde_json::to_string(k).expect("strings serialise");
                        format!("{key}:{}", v.render_json(opts.decimals))
                    })
                    .collect();
                out.push('{');
                out.push_str(&body.join(","));
                out.push_str("}\n");
            }
            Ok(out)
        }
    }
}

/// Parses CSV produced by [`emit`], inferring each field's type.
pub fn parse_csv(text: &str) -> Result<Vec<OutputRecord>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers: Vec<String> = rdr
        .headers()
        .map_err(csv_error)?
        .iter()
        .map(str::to_string)
        .collect();
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(csv_error)?;
        let fields = headers
            .iter()
            .zip(row.iter())
            .map(|(k, v)| (k.clone(), Value::infer(v)))
            .collect();
        out.push(OutputRecord { fields });
    }
    Ok(out)
}

/// Parses `2`, `2..5` (inclusive) or comma-separated mixes such as `2,4..6`.
pub fn parse_degree_list(spec: &str) -> Result<Vec<u32>> {
    let bad = || Error::Invalid(format!("malformed degree list '{spec}'"));
    let mut out = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if let Some(&d) = out.iter().find(|&&d| d < 2) {
        return Err(Error::InvalidDegree(d));
    }
    Ok(out)
}

/// Every bound for each degree, in input order.
pub fn cmd_bounds(degrees: &[u32]) -> Result<Vec<OutputRecord>> {
    degrees
        .iter()
        .map(|&d| {
            let b = literature_bounds(d)?;
            Ok(OutputRecord::new()
                .with("d", d)
                .with("lb_pc", b.lb_pc)
                .with("lb_pc_hat", b.lb_pc_hat)
                .with("ub_pc", b.ub_pc)
                .with("amp2002_lb", b.amp2002_lb)
                .with("amp2002_ub", b.amp2002_ub)
                .with("lmp2005_ub", b.lmp2005_ub)
                .with("gms2018_ub", b.gms2018_ub)
                .with("l2019_ub", b.l2019_ub)
                .with("vacuous", b.vacuous.names()))
        })
        .collect()
}

/// The comparison table: lower bound on `p_c`, lower bound on the oriented
/// critical point, and the common upper bound.
pub fn cmd_table() -> Result<Vec<OutputRecord>> {
    TABLE_DEGREES
        .iter()
        .map(|&d| {
            let b = literature_bounds(d)?;
            Ok(OutputRecord::new()
                .with("d", d)
                .with("lb_pc", b.lb_pc)
                .with("lb_pc_hat", b.lb_pc_hat)
                .with("ub_pc", b.ub_pc))
        })
        .collect()
}

pub fn cmd_solve(d: u32, tol: f64) -> Result<OutputRecord> {
    let rc = solve_rc(d, tol)?;
    let df = d as f64;
    let (p_lo, p_hi) = (p_of_r_real(rc.lo, df), p_of_r_real(rc.hi, df));
    Ok(OutputRecord::new()
        .with("d", d)
        .with("r_lo", rc.lo)
        .with("r_hi", rc.hi)
        .with("p_hat_lo", p_lo)
        .with("p_hat_hi", p_hi)
        .with("p_hat", p_of_r_real(rc.midpoint(), df))
        .with("terms_used", rc.terms_used))
}

/// Summary of a simulation together with the per-replica outcomes.
pub fn cmd_simulate(config: &SimConfig) -> Result<(OutputRecord, Vec<SimOutcome>)> {
    let est = survival_frequency(config)?;
    let truncated = est.outcomes.iter().filter(|o| o.truncated).count();
    let rec = OutputRecord::new()
        .with("d", config.d)
        .with("p", config.p)
        .with("variant", config.variant.to_string())
        .with("replicas", config.replicas)
        .with("max_activations", config.max_activations)
        .with("seed", config.seed)
        .with("freq", est.freq)
        .with("ci_lo", est.wilson_ci.0)
        .with("ci_hi", est.wilson_ci.1)
        .with("truncated", truncated);
    Ok((rec, est.outcomes))
}

/// Summary of one coupled run. A seeding failure still yields a record with
/// `seeded = false` and is returned alongside the error.
pub fn cmd_couple(d: u32, p: f64, steps: u64, seed: u64) -> (OutputRecord, Result<crate::branching::CoupledRun>) {
    let base = OutputRecord::new()
        .with("d", d)
        .with("p", p)
        .with("seed", seed);
    let run = ModelParams::new(d, p).and_then(|params| run_coupled(params, steps, seed));
    let rec = match &run {
        Ok(r) => {
            let s = r.final_state();
            base.with("seeded", true)
                .with("restarts", r.restarts)
                .with("steps", s.t)
                .with("n_tt1", s.n_tt1)
                .with("n_tt2", s.n_tt2)
                .with("n_fm1", s.n_fm1)
                .with("n_fm2", s.n_fm2)
                .with("fm_extinct", s.n_fm1 + s.n_fm2 == 0)
                .with("constraint_flags", r.constraint_flags)
                .with("violations", r.violations)
        }
        Err(_) => base
            .with("seeded", false)
            .with("restarts", 0u64)
            .with("steps", 0u64)
            .with("n_tt1", 0u64)
            .with("n_tt2", 0u64)
            .with("n_fm1", 0u64)
            .with("n_fm2", 0u64)
            .with("fm_extinct", true)
            .with("constraint_flags", 0u64)
            .with("violations", 0u64),
    };
    (rec, run)
}

#[derive(Debug, Parser)]
#[command(name = "frogbound", version, about = "Critical-parameter bounds and simulations for the frog model on homogeneous trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write records here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Digits after the decimal point; `full` prints round-trip values.
    #[arg(long, default_value = "7")]
    pub decimals: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// All bounds for one or more degrees.
    Bounds {
        #[arg(long)]
        d: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The comparison table for d = 2..10, 20, 50, 100.
    Table {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Encloses the oriented critical point via the renewal series.
    Solve {
        #[arg(long)]
        d: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte Carlo survival frequency.
    Simulate {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value = "full")]
        variant: VariantArg,
        #[arg(long, default_value_t = 1000)]
        replicas: u64,
        #[arg(long, default_value_t = SimConfig::DEFAULT_MAX_ACTIVATIONS)]
        max_activations: u64,
        #[arg(long, default_value_t = SimConfig::DEFAULT_MAX_STEPS)]
        max_steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write one CSV row per replica to this path.
        #[arg(long)]
        replicas_out: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Coupled run of the frog model and its dominating branching process.
    Couple {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        p: f64,
        #[arg(long, alias = "max-steps", default_value_t = 10_000)]
        steps: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the step-by-step trace as CSV to this path.
        #[arg(long)]
        trace_out: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Full,
    Oriented,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Full => Variant::Full,
            VariantArg::Oriented => Variant::Oriented,
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoSignChange { .. }
        | Error::ZeroDerivative(_)
        | Error::Divergent(_)
        | Error::ToleranceUnreachable { .. }
        | Error::SeedingExhausted(_)
        | Error::VertexStoreFull(_)
        | Error::NonMonotone { .. } => EXIT_NUMERIC,
        _ => EXIT_USAGE,
    }
}

impl OutputArgs {
    fn options(&self) -> Result<OutputOptions> {
        let decimals = match self.decimals.as_str() {
            "full" => None,
            s => Some(
                s.parse()
                    .map_err(|_| Error::Invalid(format!("bad --decimals '{s}'")))?,
            ),
        };
        Ok(OutputOptions {
            format: self.format,
            decimals,
        })
    }

    fn write(&self, records: &[OutputRecord], stdout: &mut dyn Write) -> Result<()> {
        let text = emit(records, self.options()?)?;
        let io = |e: io::Error| Error::Invalid(format!("write failed: {e}"));
        match &self.out {
            Some(path) => File::create(path)
                .and_then(|mut f| f.write_all(text.as_bytes()))
                .map_err(io),
            None => stdout.write_all(text.as_bytes()).map_err(io),
        }
    }
}

fn create(path: &PathBuf) -> Result<File> {
    File::create(path).map_err(|e| Error::Invalid(format!("cannot create {}: {e}", path.display())))
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Bounds { d, output } => {
            output.write(&cmd_bounds(&parse_degree_list(&d)?)?, stdout)?;
        }
        Command::Table { output } => output.write(&cmd_table()?, stdout)?,
        Command::Solve { d, tol, output } => {
            let records = parse_degree_list(&d)?
                .into_iter()
                .map(|d| cmd_solve(d, tol))
                .collect::<Result<Vec<_>>>()?;
            output.write(&records, stdout)?;
        }
        Command::Simulate {
            d,
            p,
            variant,
            replicas,
            max_activations,
            max_steps,
            seed,
            replicas_out,
            output,
        } => {
            let config = SimConfig {
                d,
                p,
                variant: variant.into(),
                max_activations,
                max_steps,
                replicas,
                seed,
                max_vertices: SimConfig::DEFAULT_MAX_VERTICES,
            };
            let (rec, outcomes) = cmd_simulate(&config)?;
            if let Some(path) = &replicas_out {
                write_replicas_csv(&outcomes, create(path)?)?;
            }
            output.write(&[rec], stdout)?;
        }
        Command::Couple {
            d,
            p,
            steps,
            seed,
            trace_out,
            output,
        } => {
            let (rec, run) = cmd_couple(d, p, steps, seed);
            match run {
                Ok(run) => {
                    if let Some(path) = &trace_out {
                        write_trace_csv(&run, create(path)?)?;
                    }
                    output.write(&[rec], stdout)?;
                    if run.violations > 0 {
                        return Ok(EXIT_VIOLATION);
                    }
                }
                Err(e @ Error::SeedingExhausted(_)) => {
                    output.write(&[rec], stdout)?;
                    return Err(e);
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(EXIT_OK)
}

/// Caps the global thread pool from `FROGBOUND_THREADS`, if set.
pub fn configure_threads() {
    if let Some(n) = std::env::var("FROGBOUND_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // a pool may already exist when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
