//! Experiment harness behind the `noisy-grover` binary.
//!
//! Three subcommands produce tables: `pmin` (rerun budgets), `sweep`
//! (success probability over an alpha grid) and `threshold` (largest
//! competitive alpha per size and family). Tables are written as CSV with
//! the columns `n,N,family,alpha,p,p_min,k,confidence` (plus `status` for
//! `threshold`) or as a JSON array of objects with the same keys.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{
    sweep_points, ComplexityBudget, ThresholdSearch, ThresholdStatus, COARSE_STEP,
    DEFAULT_CONFIDENCE, DEFAULT_RESOLUTION,
};
use crate::channel::NoiseKind;
use crate::error::{Error, Result};
use crate::grover::{default_marked, GroverInstance};
use crate::state::MAX_QUBITS;

pub const CSV_COLUMNS: [&str; 8] = ["n", "N", "family", "alpha", "p", "p_min", "k", "confidence"];

#[derive(Debug, Parser)]
#[command(name = "noisy-grover", version, about = "Grover search under local Kraus noise")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Pmin,
    Sweep,
    Threshold,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rerun budget k and minimal success probability per register size.
    Pmin(ExperimentArgs),
    /// Success probability over a grid of noise strengths.
    Sweep(ExperimentArgs),
    /// Largest noise strength at which Grover search still beats classical search.
    Threshold(ExperimentArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    /// Register sizes, `min..max` (inclusive) or a single count.
    /// Defaults: pmin 3..8, sweep 6, threshold 4..8.
    #[arg(long)]
    pub qubits: Option<QubitRange>,
    /// Noise family name, or `all`.
    #[arg(long, default_value = "all")]
    pub family: String,
    #[arg(long, default_value_t = DEFAULT_CONFIDENCE)]
    pub confidence: f64,
    /// Alpha grid for `sweep`, `start:stop:step`.
    #[arg(long, default_value = "0:1:0.01")]
    pub alpha_grid: AlphaGrid,
    /// Bisection resolution for `threshold`.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: f64,
    /// Marked element; defaults to 2^(n-1).
    #[arg(long)]
    pub marked: Option<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QubitRange {
    pub min: usize,
    pub max: usize,
}

impl QubitRange {
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        self.min..=self.max
    }
}

impl FromStr for QubitRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid qubit count '{t}'"))
        };
        match s.split_once("..") {
            Some((a, b)) => Ok(Self {
                min: parse(a)?,
                max: parse(b.trim_start_matches('='))?,
            }),
            None => {
                let n = parse(s)?;
                Ok(Self { min: n, max: n })
            }
        }
    }
}

impl fmt::Display for QubitRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.min, self.max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl AlphaGrid {
    /// `start + i * step` for every `i` that stays at or below `stop`.
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=count)
            .map(|i| (self.start + i as f64 * self.step).min(self.stop))
            .collect()
    }
}

impl Default for AlphaGrid {
    fn default() -> Self {
        Self {
            start: 0.0,
            stop: 1.0,
            step: 0.01,
        }
    }
}

impl FromStr for AlphaGrid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(format!("alpha grid '{s}' is not start:stop:step"));
        };
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("invalid number '{t}' in alpha grid"))
        };
        Ok(Self {
            start: parse(start)?,
            stop: parse(stop)?,
            step: parse(step)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// A validated experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub qubits: QubitRange,
    pub families: Vec<NoiseKind>,
    pub confidence: f64,
    pub grid: AlphaGrid,
    pub resolution: f64,
    pub marked: Option<usize>,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_args(command: CommandKind, args: &ExperimentArgs) -> Result<Self> {
        let qubits = args.qubits.unwrap_or(match command {
            CommandKind::Pmin => QubitRange { min: 3, max: 8 },
            CommandKind::Sweep => QubitRange { min: 6, max: 6 },
            CommandKind::Threshold => QubitRange { min: 4, max: 8 },
        });
        let families = parse_families(&args.family)?;
        let config = Self {
            qubits,
            families,
            confidence: args.confidence,
            grid: args.alpha_grid,
            resolution: args.resolution,
            marked: args.marked,
            format: args.format,
            output: args.output.clone(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn new(qubits: QubitRange, families: Vec<NoiseKind>) -> Self {
        Self {
            qubits,
            families,
            confidence: DEFAULT_CONFIDENCE,
            grid: AlphaGrid::default(),
            resolution: DEFAULT_RESOLUTION,
            marked: None,
            format: OutputFormat::Csv,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let QubitRange { min, max } = self.qubits;
        if min < 1 || max > MAX_QUBITS || min > max {
            return Err(Error::InvalidConfig(format!(
                "qubit range {} must satisfy 1 <= min <= max <= {MAX_QUBITS}",
                self.qubits
            )));
        }
        if self.families.is_empty() {
            return Err(Error::InvalidConfig("no noise family selected".into()));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "confidence {} must lie strictly between 0 and 1",
                self.confidence
            )));
        }
        let AlphaGrid { start, stop, step } = self.grid;
        if !(step > 0.0) || !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&stop) || start > stop {
            return Err(Error::InvalidConfig(format!(
                "alpha grid {start}:{stop}:{step} needs 0 <= start <= stop <= 1 and step > 0"
            )));
        }
        if !(self.resolution > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "resolution {} must be positive",
                self.resolution
            )));
        }
        if let Some(m) = self.marked {
            if m >= 1 << min {
                return Err(Error::InvalidConfig(format!(
                    "marked element {m} does not fit a {min}-qubit register"
                )));
            }
        }
        Ok(())
    }

    fn marked_for(&self, qubits: usize) -> usize {
        self.marked.unwrap_or_else(|| default_marked(qubits))
    }
}

pub fn parse_families(s: &str) -> Result<Vec<NoiseKind>> {
    if s == "all" {
        return Ok(NoiseKind::ALL.to_vec());
    }
    s.split(',').map(|name| name.trim().parse()).collect()
}

/// One output row. Absent fields are empty in CSV and omitted in JSON.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub qubits: usize,
    pub size: usize,
    pub family: Option<NoiseKind>,
    pub alpha: Option<f64>,
    pub p: Option<f64>,
    pub p_min: Option<f64>,
    pub k: u64,
    pub confidence: f64,
    pub status: Option<ThresholdStatus>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub rows: Vec<Row>,
    /// Whether the `status` column is emitted.
    pub with_status: bool,
}

/// Rows `(N, k, p_min)` per register size.
pub fn cmd_pmin(config: &ExperimentConfig) -> Result<Table> {
    config.validate()?;
    let rows = config
        .qubits
        .iter()
        .map(|n| {
            let budget = ComplexityBudget::for_qubits(n, config.confidence)?;
            Ok(Row {
                qubits: n,
                size: budget.size,
                family: None,
                alpha: None,
                p: None,
                p_min: budget.p_min,
                k: budget.reruns,
                confidence: config.confidence,
                status: None,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Table {
        rows,
        with_status: false,
    })
}

/// One row per `(n, family, alpha)`.
pub fn cmd_sweep(config: &ExperimentConfig) -> Result<Table> {
    config.validate()?;
    let alphas = config.grid.points();
    let mut rows = Vec::new();
    for n in config.qubits.iter() {
        let inst = GroverInstance::new(n, config.marked_for(n))?;
        let budget = ComplexityBudget::new(inst.size(), config.confidence)?;
        for &kind in &config.families {
            for point in sweep_points(&inst, kind, &alphas)? {
                rows.push(Row {
                    qubits: n,
                    size: inst.size(),
                    family: Some(kind),
                    alpha: Some(point.alpha),
                    p: Some(point.success),
                    p_min: budget.p_min,
                    k: budget.reruns,
                    confidence: config.confidence,
                    status: None,
                });
            }
        }
    }
    Ok(Table {
        rows,
        with_status: false,
    })
}

/// One row per `(n, family)` with the threshold alpha and its status.
pub fn cmd_threshold(config: &ExperimentConfig) -> Result<Table> {
    config.validate()?;
    let search = ThresholdSearch {
        confidence: config.confidence,
        resolution: config.resolution,
        coarse_step: COARSE_STEP,
        marked: config.marked,
    };
    let mut rows = Vec::new();
    for n in config.qubits.iter() {
        for &kind in &config.families {
            let t = search.run(n, kind)?;
            rows.push(Row {
                qubits: n,
                size: t.budget.size,
                family: Some(kind),
                alpha: t.alpha,
                p: t.success,
                p_min: t.budget.p_min,
                k: t.budget.reruns,
                confidence: config.confidence,
                status: Some(t.status),
            });
        }
    }
    Ok(Table {
        rows,
        with_status: true,
    })
}

/// Six significant digits; lowercase scientific notation below `1e-4`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0.00000".into();
    }
    let sci = format!("{x:.5e}");
    if x.abs() < 1e-4 {
        return sci;
    }
    let exponent: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    let decimals = (5 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

fn rounded(x: f64) -> f64 {
    format_number(x).parse().unwrap_or(x)
}

#[derive(Serialize)]
struct JsonRow {
    n: usize,
    #[serde(rename = "N")]
    size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<NoiseKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_min: Option<f64>,
    k: u64,
    confidence: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    status: Option<ThresholdStatus>,
}

impl From<&Row> for JsonRow {
    fn from(r: &Row) -> Self {
        Self {
            n: r.qubits,
            size: r.size,
            family: r.family,
            alpha: r.alpha.map(rounded),
            p: r.p.map(rounded),
            p_min: r.p_min.map(rounded),
            k: r.k,
            confidence: rounded(r.confidence),
            status: r.status,
        }
    }
}

pub fn write_table(table: &Table, format: OutputFormat, out: &mut impl Write) -> anyhow::Result<()> {
    match format {
        OutputFormat::Csv => write_csv(table, out),
        OutputFormat::Json => {
            let rows: Vec<JsonRow> = table.rows.iter().map(JsonRow::from).collect();
            serde_json::to_writer_pretty(&mut *out, &rows)?;
            writeln!(out)?;
            Ok(())
        }
    }
}

fn write_csv(table: &Table, out: &mut impl Write) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = CSV_COLUMNS.to_vec();
    if table.with_status {
        header.push("status");
    }
    w.write_record(&header)?;
    let opt = |x: Option<f64>| x.map(format_number).unwrap_or_default();
    for r in &table.rows {
        let mut record = vec![
            r.qubits.to_string(),
            r.size.to_string(),
            r.family.map(|k| k.name().to_string()).unwrap_or_default(),
            opt(r.alpha),
            opt(r.p),
            opt(r.p_min),
            r.k.to_string(),
            format_number(r.confidence),
        ];
        if table.with_status {
            record.push(r.status.map(|s| s.name().to_string()).unwrap_or_default());
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const IO: u8 = 1;
    pub const INVALID_CONFIG: u8 = 2;
    pub const NUMERICAL: u8 = 3;
}

/// Failure of a CLI invocation, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Config(Error),
    Numerical(Error),
    Io(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => exit::INVALID_CONFIG,
            CliError::Numerical(_) => exit::NUMERICAL,
            CliError::Io(_) => exit::IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Numerical(e) => write!(f, "numerical validation failed: {e}"),
            CliError::Io(e) => write!(f, "{e:#}"),
        }
    }
}

/// Runs one parsed invocation and writes its table.
pub fn run(cli: &Cli) -> std::result::Result<(), CliError> {
    let (kind, args) = match &cli.command {
        Command::Pmin(a) => (CommandKind::Pmin, a),
        Command::Sweep(a) => (CommandKind::Sweep, a),
        Command::Threshold(a) => (CommandKind::Threshold, a),
    };
    let config = ExperimentConfig::from_args(kind, args).map_err(CliError::Config)?;
    let table = match kind {
        CommandKind::Pmin => cmd_pmin(&config),
        CommandKind::Sweep => cmd_sweep(&config),
        CommandKind::Threshold => cmd_threshold(&config),
    }
    .map_err(CliError::Numerical)?;

    match &config.output {
        Some(path) => {
            let mut buf = Vec::new();
            write_table(&table, config.format, &mut buf).map_err(CliError::Io)?;
            std::fs::write(path, buf)
                .map_err(|e| CliError::Io(anyhow::anyhow!("writing {}: {e}", path.display())))
        }
        None => {
            let stdout = std::io::stdout();
            write_table(&table, config.format, &mut stdout.lock()).map_err(CliError::Io)
        }
    }
}
