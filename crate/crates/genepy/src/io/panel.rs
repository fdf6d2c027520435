use genepy_core::ScorePanel;

use super::{csv_error, exact, finish, parse_number, reader, writer, ParseError};

const ENTITY_HEADER: &str = "entity";

/// A structurally sound panel table whose values have not been checked
/// against the panel invariants yet.
#[derive(Clone, Debug, PartialEq)]
pub struct PanelGrid {
    pub entities: Vec<String>,
    pub categories: Vec<String>,
    /// Row-major; `None` for an empty cell.
    pub cells: Vec<Option<f64>>,
}

impl PanelGrid {
    pub fn into_panel(self, year: &str) -> Result<ScorePanel, ParseError> {
        Ok(ScorePanel::new(year, self.entities, self.categories, self.cells)?)
    }

    /// Keeps invariant violations so they can be reported as findings.
    pub fn into_unchecked(self, year: &str) -> ScorePanel {
        ScorePanel::unchecked(year, self.entities, self.categories, self.cells)
            .expect("grid is rectangular by construction")
    }
}

/// Parse the table structure only: header, rectangular rows, numeric cells.
pub fn parse_panel_grid(text: &str) -> Result<PanelGrid, ParseError> {
    let mut rdr = reader(text);
    let mut records = rdr.records();
    let header = match records.next() {
        None => return Err(ParseError::Empty),
        Some(r) => r.map_err(csv_error)?,
    };
    let first = header.get(0).unwrap_or_default();
    if first != ENTITY_HEADER {
        return Err(ParseError::Header {
            expected: ENTITY_HEADER.into(),
            found: first.into(),
        });
    }
    let width = header.len();
    let mut categories = Vec::with_capacity(width - 1);
    for (k, c) in header.iter().enumerate().skip(1) {
        if c.is_empty() {
            return Err(ParseError::EmptyId {
                line: 1,
                field: k + 1,
                what: "category",
            });
        }
        categories.push(c.to_owned());
    }

    let mut entities = Vec::new();
    let mut cells = Vec::new();
    for rec in records {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != width {
            return Err(ParseError::Ragged {
                line,
                expected: width,
                found: rec.len(),
            });
        }
        let id = &rec[0];
        if id.is_empty() {
            return Err(ParseError::EmptyId {
                line,
                field: 1,
                what: "entity",
            });
        }
        entities.push(id.to_owned());
        for (k, cell) in rec.iter().enumerate().skip(1) {
            cells.push(match cell {
                "" => None,
                s => Some(parse_number(s, line, k + 1)?),
            });
        }
    }
    Ok(PanelGrid {
        entities,
        categories,
        cells,
    })
}

/// Parse and validate a wide panel CSV: header `entity,<cat>,...`, one row
/// per entity, empty cell = missing.
pub fn parse_panel(text: &str, year: &str) -> Result<ScorePanel, ParseError> {
    parse_panel_grid(text)?.into_panel(year)
}

/// Inverse of [`parse_panel`]. Scores are written in shortest round-trip
/// form, so re-parsing gives back identical values.
pub fn emit_panel(panel: &ScorePanel) -> String {
    let mut w = writer();
    let mut header = vec![ENTITY_HEADER];
    header.extend(panel.categories().iter().map(String::as_str));
    w.write_record(&header).expect("in-memory write");
    for (i, e) in panel.entities().iter().enumerate() {
        let mut row = vec![e.clone()];
        row.extend((0..panel.n_categories()).map(|j| panel.value(i, j).map(exact).unwrap_or_default()));
        w.write_record(&row).expect("in-memory write");
    }
    finish(w)
}
