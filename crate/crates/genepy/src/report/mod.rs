//! CSV/JSON tables and SVG charts.

mod charts;
mod svg;
mod table;

pub use charts::{
    emit_bipartite, emit_grouped_bars, emit_heatmap, emit_rank_bump, emit_weight_bars,
    emit_weighted_lines,
};
pub use table::{
    emit_table, CategoryScoresTable, Cell, CorrelationRow, EntityScoresTable, Format,
    RankComparison, SolverRow, Tabular,
};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChartKind {
    Heatmap,
    Bipartite,
    WeightBars,
    WeightedLines,
    RankBump,
    GroupedBars,
}

impl ChartKind {
    pub const ALL: [ChartKind; 6] = [
        ChartKind::Heatmap,
        ChartKind::Bipartite,
        ChartKind::WeightBars,
        ChartKind::WeightedLines,
        ChartKind::RankBump,
        ChartKind::GroupedBars,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ChartKind::Heatmap => "heatmap",
            ChartKind::Bipartite => "bipartite",
            ChartKind::WeightBars => "weight_bars",
            ChartKind::WeightedLines => "weighted_lines",
            ChartKind::RankBump => "rank_bump",
            ChartKind::GroupedBars => "grouped_bars",
        }
    }

    /// Charts drawn once per year, as opposed to once per run.
    pub fn is_per_year(self) -> bool {
        !matches!(self, ChartKind::RankBump | ChartKind::GroupedBars)
    }
}

impl fmt::Display for ChartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChartKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ChartKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown chart kind `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub fn hex(self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.0, self.1, self.2)
    }
}

/// Low end of the default ramp.
pub const YELLOW: Rgb = Rgb(250, 220, 40);
/// High end of the default ramp.
pub const GREEN: Rgb = Rgb(30, 140, 60);

#[derive(Clone, Debug, PartialEq)]
pub struct ChartSpec {
    pub kind: ChartKind,
    pub title: String,
    pub low: Rgb,
    pub high: Rgb,
    /// Pixels.
    pub width: u32,
    pub height: u32,
}

impl ChartSpec {
    pub fn new(kind: ChartKind, title: impl Into<String>) -> Self {
        let (width, height) = match kind {
            ChartKind::Heatmap => (900, 1000),
            ChartKind::Bipartite => (800, 700),
            ChartKind::WeightBars => (700, 500),
            ChartKind::WeightedLines => (1000, 600),
            ChartKind::RankBump => (800, 900),
            ChartKind::GroupedBars => (1100, 500),
        };
        Self {
            kind,
            title: title.into(),
            low: YELLOW,
            high: GREEN,
            width,
            height,
        }
    }

    /// Linear interpolation between `low` (t = 0) and `high` (t = 1);
    /// `t` is clamped to `[0, 1]`.
    pub fn ramp(&self, t: f64) -> Rgb {
        let t = if t.is_nan() { 0.0 } else { t.clamp(0.0, 1.0) };
        let mix = |a: u8, b: u8| (f64::from(a) + (f64::from(b) - f64::from(a)) * t).round() as u8;
        Rgb(
            mix(self.low.0, self.high.0),
            mix(self.low.1, self.high.1),
            mix(self.low.2, self.high.2),
        )
    }

    /// Color of a score on the `[0, 100]` scale.
    pub fn score_color(&self, score: f64) -> Rgb {
        self.ramp(score / genepy_core::panel::MAX_SCORE)
    }

    fn check(&self, kind: ChartKind) -> Result<(), ReportError> {
        if self.kind != kind {
            return Err(ReportError::WrongKind {
                expected: kind,
                found: self.kind,
            });
        }
        if self.width == 0 || self.height == 0 {
            return Err(ReportError::Dimensions {
                width: self.width,
                height: self.height,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ReportError {
    #[error("chart spec is for `{found}`, emitter draws `{expected}`")]
    WrongKind { expected: ChartKind, found: ChartKind },
    #[error("chart dimensions must be positive, got {width}x{height}")]
    Dimensions { width: u32, height: u32 },
    #[error("nothing to draw: {0} is empty")]
    Empty(&'static str),
    #[error("entity `{0}` is not in the panel")]
    UnknownEntity(String),
    #[error("category axes differ: {0}")]
    AxisMismatch(&'static str),
}
