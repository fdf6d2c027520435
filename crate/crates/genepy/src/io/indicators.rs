use genepy_core::{IndicatorRecord, IndicatorTable};

use super::{csv_error, exact, finish, parse_number, reader, writer, ParseError};

pub const INDICATOR_HEADER: [&str; 4] = ["entity", "category", "indicator", "value"];

/// Long-form indicator CSV. An empty `value` declares the indicator not
/// applicable to that entity.
pub fn parse_indicators(text: &str, year: &str) -> Result<IndicatorTable, ParseError> {
    let mut rdr = reader(text);
    let mut records = rdr.records();
    let header = match records.next() {
        None => return Err(ParseError::Empty),
        Some(r) => r.map_err(csv_error)?,
    };
    if header.iter().ne(INDICATOR_HEADER) {
        return Err(ParseError::Header {
            expected: INDICATOR_HEADER.join(","),
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }
    let mut out = Vec::new();
    for rec in records {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != INDICATOR_HEADER.len() {
            return Err(ParseError::Ragged {
                line,
                expected: INDICATOR_HEADER.len(),
                found: rec.len(),
            });
        }
        for (field, what) in [(0, "entity"), (1, "category"), (2, "indicator")] {
            if rec[field].is_empty() {
                return Err(ParseError::EmptyId {
                    line,
                    field: field + 1,
                    what,
                });
            }
        }
        let value = match &rec[3] {
            "" => None,
            s => Some(parse_number(s, line, 4)?),
        };
        out.push(IndicatorRecord {
            entity: rec[0].to_owned(),
            category: rec[1].to_owned(),
            indicator: rec[2].to_owned(),
            value,
        });
    }
    Ok(IndicatorTable {
        year: year.to_owned(),
        records: out,
    })
}

pub fn emit_indicators(table: &IndicatorTable) -> String {
    let mut w = writer();
    w.write_record(INDICATOR_HEADER).expect("in-memory write");
    for r in &table.records {
        let v = r.value.map(exact).unwrap_or_default();
        w.write_record([r.entity.as_str(), &r.category, &r.indicator, &v])
            .expect("in-memory write");
    }
    finish(w)
}
