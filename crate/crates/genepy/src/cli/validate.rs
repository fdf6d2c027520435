use std::path::Path;

use genepy_core::panel::{aggregate_indicators, validate_panel, Finding};
use genepy_core::ScorePanel;

use super::{read, write, year_dir, CliError, IndicatorInput, PanelInput, EXIT_INPUT, EXIT_OK};
use crate::io::{parse_indicators, parse_panel_grid};
use crate::report::{emit_table, Format};

#[derive(Clone, Debug, PartialEq)]
pub struct ValidateReport {
    /// `(year, findings)` for every input that parsed as a table.
    pub findings: Vec<(String, Vec<Finding>)>,
    /// Inputs that could not be read as a table at all.
    pub unreadable: Vec<String>,
    /// Human-readable report, one line per finding.
    pub lines: Vec<String>,
}

impl ValidateReport {
    pub fn has_errors(&self) -> bool {
        !self.unreadable.is_empty() || self.findings.iter().any(|(_, f)| f.iter().any(Finding::is_error))
    }

    pub fn exit_code(&self) -> i32 {
        if self.has_errors() {
            EXIT_INPUT
        } else {
            EXIT_OK
        }
    }
}

/// Finding text with 1-based row and column coordinates.
fn describe(panel: &ScorePanel, f: &Finding) -> String {
    let mut place = Vec::new();
    let (row, column) = f.location();
    if let Some(r) = row {
        let id = panel.entities().get(r).map(String::as_str).unwrap_or("?");
        place.push(format!("row {} (`{id}`)", r + 1));
    }
    if let Some(c) = column {
        let id = panel.categories().get(c).map(String::as_str).unwrap_or("?");
        place.push(format!("column {} (`{id}`)", c + 1));
    }
    if place.is_empty() {
        format!("{f}")
    } else {
        format!("{f} at {}", place.join(", "))
    }
}

/// Check every input without stopping at the first problem. Structural
/// problems (unreadable file, ragged rows, non-numeric cells) are reported
/// as errors; value problems come from the panel validator.
pub fn cmd_validate(
    panels: &[PanelInput],
    indicators: Option<&IndicatorInput>,
    out: Option<&Path>,
    format: Format,
) -> Result<ValidateReport, CliError> {
    if panels.is_empty() && indicators.is_none() {
        return Err(CliError::Usage("no input: give at least one --panel or --indicators".into()));
    }
    let mut report = ValidateReport {
        findings: Vec::new(),
        unreadable: Vec::new(),
        lines: Vec::new(),
    };
    let unreadable = |year: &str, path: &Path, msg: String, report: &mut ValidateReport| {
        report.lines.push(format!("{year}: error: {}: {msg}", path.display()));
        report.unreadable.push(year.to_owned());
    };

    let mut parsed: Vec<ScorePanel> = Vec::new();
    for p in panels {
        let text = match read(&p.path) {
            Ok(t) => t,
            Err(e) => {
                unreadable(&p.year, &p.path, e.to_string(), &mut report);
                continue;
            }
        };
        match parse_panel_grid(&text) {
            Ok(grid) => parsed.push(grid.into_unchecked(&p.year)),
            Err(e) => unreadable(&p.year, &p.path, e.to_string(), &mut report),
        }
    }
    if let Some(ind) = indicators {
        let panel = read(&ind.path).and_then(|t| {
            let table = parse_indicators(&t, &ind.year).map_err(|e| CliError::Usage(e.to_string()))?;
            aggregate_indicators(&table).map_err(|e| CliError::Usage(e.to_string()))
        });
        match panel {
            Ok(panel) => parsed.push(panel),
            Err(e) => unreadable(&ind.year, &ind.path, e.to_string(), &mut report),
        }
    }

    for panel in parsed {
        let findings = validate_panel(&panel);
        for f in &findings {
            report.lines.push(format!("{}: {}", panel.year(), describe(&panel, f)));
        }
        if findings.is_empty() {
            report.lines.push(format!(
                "{}: ok ({} entities x {} categories)",
                panel.year(),
                panel.n_entities(),
                panel.n_categories()
            ));
        }
        if let Some(dir) = out {
            let name = format!("findings_{}.{}", year_dir(panel.year()), format.extension());
            write(&dir.join(name), &emit_table(findings.as_slice(), format))?;
        }
        report.findings.push((panel.year().to_owned(), findings));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_are_one_based() {
        let p = ScorePanel::unchecked("t", vec!["a".into(), "b".into()], vec!["x".into(), "y".into()], vec![
            Some(1.0),
            Some(2.0),
            Some(3.0),
            Some(140.0),
        ])
        .unwrap();
        let f = validate_panel(&p);
        let err = f.iter().find(|f| f.is_error()).unwrap();
        let text = describe(&p, err);
        assert!(text.contains("row 2 (`b`)") && text.contains("column 2 (`y`)"), "{text}");
    }
}
