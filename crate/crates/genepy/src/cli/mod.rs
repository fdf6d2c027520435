//! Command-line driver: `compute`, `compare` and `validate`.
//!
//! Exit codes: 0 success, 1 input error, 2 degenerate panel, 3 solver
//! non-convergence.

mod compare;
mod compute;
mod pipeline;
mod validate;

pub use compare::{cmd_compare, CompareConfig, CompareReport};
pub use compute::{cmd_compute, ComputeSummary};
pub use validate::{cmd_validate, ValidateReport};

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use genepy_core::analytics::{AnalyticsError, RankBasis};
use genepy_core::complexity::{DEFAULT_MAX_STEPS, DEFAULT_TOL};
use genepy_core::panel::AlignError;
use genepy_core::{ComplexityError, SolverOptions};
use thiserror::Error;

use crate::io::ParseError;
use crate::report::{ChartKind, Format, ReportError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_NONCONVERGED: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("year {year}: {source}")]
    Complexity {
        year: String,
        #[source]
        source: ComplexityError,
    },
    #[error("year {year}: {method} solver did not converge in {steps} steps (residual {residual:e}); rerun with --allow-nonconverged to keep the last iterate")]
    NotConverged {
        year: String,
        method: &'static str,
        steps: usize,
        residual: f64,
    },
    #[error("year {year}: {source}")]
    Analytics {
        year: String,
        #[source]
        source: AnalyticsError,
    },
    #[error("aligning {from} -> {to}: {source}")]
    Align {
        from: String,
        to: String,
        #[source]
        source: AlignError,
    },
    #[error("{what}: {source}")]
    Report {
        what: String,
        #[source]
        source: ReportError,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { source, .. } if source.is_degenerate() => EXIT_DEGENERATE,
            CliError::Complexity { source, .. } if source.is_degenerate() => EXIT_DEGENERATE,
            CliError::Complexity { source, .. } if source.is_nonconvergence() => EXIT_NONCONVERGED,
            CliError::NotConverged { .. } => EXIT_NONCONVERGED,
            CliError::Analytics {
                source: AnalyticsError::NonPositive { .. },
                ..
            } => EXIT_DEGENERATE,
            _ => EXIT_INPUT,
        }
    }
}

/// `<year>=<path>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PanelInput {
    pub year: String,
    pub path: PathBuf,
}

impl FromStr for PanelInput {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('=') {
            Some((y, p)) if !y.trim().is_empty() && !p.is_empty() => Ok(Self {
                year: y.trim().to_owned(),
                path: PathBuf::from(p),
            }),
            _ => Err(format!("expected <year>=<path>, got `{s}`")),
        }
    }
}

/// `[<year>=]<path>`. Without a year the file stem is used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicatorInput {
    pub year: String,
    pub path: PathBuf,
}

impl FromStr for IndicatorInput {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(p) = s.parse::<PanelInput>() {
            return Ok(Self { year: p.year, path: p.path });
        }
        let path = PathBuf::from(s);
        let year = path
            .file_stem()
            .and_then(|x| x.to_str())
            .filter(|x| !x.is_empty())
            .ok_or_else(|| format!("expected [<year>=]<path>, got `{s}`"))?
            .to_owned();
        Ok(Self { year, path })
    }
}

/// `<from-year>-><to-year>=<path>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapInput {
    pub from: String,
    pub to: String,
    pub path: PathBuf,
}

impl FromStr for MapInput {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("expected <year>-><year>=<path>, got `{s}`");
        let (years, path) = s.split_once('=').ok_or_else(bad)?;
        let (from, to) = years.split_once("->").ok_or_else(bad)?;
        let (from, to) = (from.trim(), to.trim());
        if from.is_empty() || to.is_empty() || path.is_empty() {
            return Err(bad());
        }
        Ok(Self {
            from: from.to_owned(),
            to: to.to_owned(),
            path: PathBuf::from(path),
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Spectral,
    Iterative,
    #[default]
    Both,
}

impl MethodChoice {
    pub fn spectral(self) -> bool {
        self != MethodChoice::Iterative
    }

    pub fn iterative(self) -> bool {
        self != MethodChoice::Spectral
    }
}

/// One entry of `--charts`: a chart kind, `all` or `none`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartSelection {
    All,
    None,
    Kind(ChartKind),
}

impl FromStr for ChartSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "all" => Ok(ChartSelection::All),
            "none" => Ok(ChartSelection::None),
            k => k.parse().map(ChartSelection::Kind),
        }
    }
}

fn resolve_charts(sel: &[ChartSelection]) -> Vec<ChartKind> {
    if sel.contains(&ChartSelection::None) {
        return Vec::new();
    }
    if sel.contains(&ChartSelection::All) {
        return ChartKind::ALL.to_vec();
    }
    let mut kinds: Vec<ChartKind> = sel
        .iter()
        .filter_map(|s| match s {
            ChartSelection::Kind(k) => Some(*k),
            _ => None,
        })
        .collect();
    kinds.sort();
    kinds.dedup();
    kinds
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

impl From<TableFormat> for Format {
    fn from(f: TableFormat) -> Self {
        match f {
            TableFormat::Csv => Format::Csv,
            TableFormat::Json => Format::Json,
        }
    }
}

/// Everything `compute` needs.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub panels: Vec<PanelInput>,
    pub indicators: Option<IndicatorInput>,
    pub maps: Vec<MapInput>,
    pub method: MethodChoice,
    pub tol: f64,
    pub max_steps: usize,
    pub out: PathBuf,
    pub charts: Vec<ChartKind>,
    pub format: Format,
    pub allow_nonconverged: bool,
    /// Entities drawn in the bipartite chart; empty means the top 8.
    pub bipartite: Vec<String>,
}

impl RunConfig {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        Self {
            panels: Vec::new(),
            indicators: None,
            maps: Vec::new(),
            method: MethodChoice::Both,
            tol: DEFAULT_TOL,
            max_steps: DEFAULT_MAX_STEPS,
            out: out.into(),
            charts: ChartKind::ALL.to_vec(),
            format: Format::Csv,
            allow_nonconverged: false,
            bipartite: Vec::new(),
        }
    }

    pub fn check(&self) -> Result<(), CliError> {
        if self.panels.is_empty() && self.indicators.is_none() {
            return Err(CliError::Usage("no input: give at least one --panel or --indicators".into()));
        }
        check_solver(self.tol, self.max_steps)
    }

    pub(crate) fn solver(&self) -> SolverOptions {
        SolverOptions {
            tol: self.tol,
            max_steps: self.max_steps,
            require_convergence: !self.allow_nonconverged,
        }
    }
}

fn check_solver(tol: f64, max_steps: usize) -> Result<(), CliError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be a positive number, got {tol}")));
    }
    if max_steps == 0 {
        return Err(CliError::Usage("--max-steps must be at least 1".into()));
    }
    Ok(())
}

#[derive(Debug, Parser)]
#[command(name = "genepy", version, about = "Complexity-based rankings from entity x category score panels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute scores, weights, rankings and charts for every year.
    Compute(ComputeArgs),
    /// Spearman correlation between two rankings.
    Compare(CompareArgs),
    /// Check panels and report findings; exits 1 iff there are errors.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Wide score panel for one year (repeatable, in chronological order).
    #[arg(long = "panel", value_name = "YEAR=PATH")]
    pub panels: Vec<PanelInput>,
    /// Long-form indicator table, aggregated into a panel for one year.
    #[arg(long, value_name = "[YEAR=]PATH")]
    pub indicators: Option<IndicatorInput>,
    /// Entity correspondence between two consecutive years (repeatable).
    #[arg(long = "entity-map", value_name = "FROM->TO=PATH")]
    pub maps: Vec<MapInput>,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, value_enum, default_value_t = MethodChoice::Both)]
    pub method: MethodChoice,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: usize,
    /// Keep the last iterate instead of failing with exit code 3.
    #[arg(long)]
    pub allow_nonconverged: bool,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, value_name = "DIR", default_value = "genepy-out")]
    pub out: PathBuf,
    /// Comma-separated chart kinds, `all` or `none`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    pub charts: Vec<ChartSelection>,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
    /// Entities for the bipartite chart (default: the 8 best ranked).
    #[arg(long, value_delimiter = ',', value_name = "IDS")]
    pub bipartite: Vec<String>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// First ranking basis: k_s, composite_mean, D_s or D_s_iterative.
    #[arg(long = "basis-a", value_parser = parse_basis, default_value = "k_s")]
    pub basis_a: RankBasis,
    /// Second ranking basis.
    #[arg(long = "basis-b", value_parser = parse_basis, default_value = "D_s")]
    pub basis_b: RankBasis,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Also write the findings table here.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
}

fn parse_basis(s: &str) -> Result<RankBasis, String> {
    RankBasis::parse(s).ok_or_else(|| format!("unknown basis `{s}` (k_s, composite_mean, D_s, D_s_iterative)"))
}

impl ComputeArgs {
    pub fn into_config(self) -> RunConfig {
        RunConfig {
            panels: self.input.panels,
            indicators: self.input.indicators,
            maps: self.input.maps,
            method: self.solver.method,
            tol: self.solver.tol,
            max_steps: self.solver.max_steps,
            out: self.out,
            charts: resolve_charts(&self.charts),
            format: self.format.into(),
            allow_nonconverged: self.solver.allow_nonconverged,
            bipartite: self.bipartite,
        }
    }
}

impl CompareArgs {
    pub fn into_config(self) -> CompareConfig {
        CompareConfig {
            panels: self.input.panels,
            indicators: self.input.indicators,
            maps: self.input.maps,
            basis_a: self.basis_a,
            basis_b: self.basis_b,
            tol: self.solver.tol,
            max_steps: self.solver.max_steps,
            allow_nonconverged: self.solver.allow_nonconverged,
            out: self.out,
            format: self.format.into(),
        }
    }
}

pub(crate) fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })
}

pub(crate) fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    let wrap = |source| CliError::Write {
        path: path.to_owned(),
        source,
    };
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(wrap)?;
    }
    std::fs::write(path, contents).map_err(wrap)
}

/// Year label made safe for use as a directory name.
pub(crate) fn year_dir(year: &str) -> String {
    let s: String = year
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') { c } else { '_' })
        .collect();
    if s.chars().all(|c| c == '.') {
        format!("_{s}")
    } else {
        s
    }
}

struct Lines<'a>(&'a mut dyn Write);

impl Lines<'_> {
    fn put(&mut self, s: impl fmt::Display) {
        let _ = writeln!(self.0, "{s}");
    }
}

/// Parse `args` (including the program name), run the command and return
/// the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            // usage errors are input errors; 2 is reserved for degenerate panels
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_INPUT
                }
            };
        }
    };
    let mut out = Lines(stdout);
    let result = match cli.command {
        Command::Compute(a) => cmd_compute(&a.into_config()).map(|s| {
            for line in s.report_lines() {
                out.put(line);
            }
            EXIT_OK
        }),
        Command::Compare(a) => cmd_compare(&a.into_config()).map(|r| {
            out.put(r.summary_line());
            out.put(r.table_text.trim_end());
            EXIT_OK
        }),
        Command::Validate(a) => {
            let format = a.format.into();
            cmd_validate(&a.input.panels, a.input.indicators.as_ref(), a.out.as_deref(), format).map(|r| {
                for line in &r.lines {
                    out.put(line);
                }
                r.exit_code()
            })
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
