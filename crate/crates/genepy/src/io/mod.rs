//! Text formats: wide panel CSV, long indicator CSV and entity-map JSON.

mod entity_map;
mod indicators;
mod panel;

pub use entity_map::{emit_entity_map, parse_entity_map};
pub use indicators::{emit_indicators, parse_indicators, INDICATOR_HEADER};
pub use panel::{emit_panel, parse_panel, parse_panel_grid, PanelGrid};

use genepy_core::PanelError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("input is empty")]
    Empty,
    #[error("line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("header must start with `{expected}`, found `{found}`")]
    Header { expected: String, found: String },
    #[error("line {line}: expected {expected} fields, found {found}")]
    Ragged {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("line {line}, field {field}: empty {what} id")]
    EmptyId {
        line: u64,
        field: usize,
        what: &'static str,
    },
    #[error("line {line}, field {field}: `{value}` is not a number")]
    NonNumeric { line: u64, field: usize, value: String },
    #[error("entity map: {0}")]
    Json(String),
    #[error(transparent)]
    Panel(#[from] PanelError),
}

impl ParseError {
    /// True when the text was well-formed but describes a degenerate panel.
    pub fn is_degenerate(&self) -> bool {
        matches!(self, ParseError::Panel(e) if e.is_degenerate())
    }
}

/// Shortest decimal text that parses back to exactly `x`.
pub(crate) fn exact(x: f64) -> String {
    format!("{x}")
}

pub(crate) fn reader(text: &str) -> csv::Reader<&[u8]> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

pub(crate) fn csv_error(e: csv::Error) -> ParseError {
    let line = e.position().map_or(0, |p| p.line());
    ParseError::Csv {
        line,
        message: e.to_string(),
    }
}

pub(crate) fn parse_number(cell: &str, line: u64, field: usize) -> Result<f64, ParseError> {
    cell.parse::<f64>().map_err(|_| ParseError::NonNumeric {
        line,
        field,
        value: cell.to_owned(),
    })
}

pub(crate) fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

pub(crate) fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes).expect("csv writer emits the UTF-8 it was given")
}
