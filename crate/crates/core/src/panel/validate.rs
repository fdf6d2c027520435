use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{PanelError, ScorePanel, MAX_SCORE};

/// A row or column is flagged when strictly more than this fraction of its
/// cells is missing.
pub const MISSINGNESS_WARNING_THRESHOLD: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Issue {
    /// A broken panel invariant.
    Invalid(PanelError),
    HighMissingColumn {
        category: String,
        column: usize,
        missing: usize,
        total: usize,
    },
    HighMissingRow {
        entity: String,
        row: usize,
        missing: usize,
        total: usize,
    },
    /// Columns whose present scores are all equal. Reported once per panel.
    ConstantColumns { categories: Vec<String> },
    /// An entity whose present scores are all zero; it has no degree and
    /// the complexity kernels will reject it.
    ZeroRow { entity: String, row: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Finding {
    pub severity: Severity,
    pub issue: Issue,
}

impl Finding {
    fn error(err: PanelError) -> Self {
        Self {
            severity: Severity::Error,
            issue: Issue::Invalid(err),
        }
    }

    fn warning(issue: Issue) -> Self {
        Self {
            severity: Severity::Warning,
            issue,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// Short machine-readable code.
    pub fn code(&self) -> &'static str {
        match &self.issue {
            Issue::Invalid(e) => match e {
                PanelError::ShapeMismatch { .. } => "shape_mismatch",
                PanelError::TooFewEntities(_) => "too_few_entities",
                PanelError::TooFewCategories(_) => "too_few_categories",
                PanelError::DuplicateEntity(_) => "duplicate_entity",
                PanelError::DuplicateCategory(_) => "duplicate_category",
                PanelError::OutOfRange { .. } => "out_of_range",
                PanelError::NonFinite { .. } => "non_finite",
                PanelError::AllMissingRow(_) => "all_missing_row",
                PanelError::AllMissingColumn(_) => "all_missing_column",
                PanelError::AllZero => "all_zero",
                _ => "invalid",
            },
            Issue::HighMissingColumn { .. } => "high_missingness_column",
            Issue::HighMissingRow { .. } => "high_missingness_row",
            Issue::ConstantColumns { .. } => "constant_columns",
            Issue::ZeroRow { .. } => "zero_row",
        }
    }

    /// Fraction of missing cells, for missingness findings.
    pub fn missing_fraction(&self) -> Option<f64> {
        match self.issue {
            Issue::HighMissingColumn { missing, total, .. }
            | Issue::HighMissingRow { missing, total, .. } => Some(missing as f64 / total as f64),
            _ => None,
        }
    }

    /// Zero-based `(row, column)` of the offending cell, row or column.
    pub fn location(&self) -> (Option<usize>, Option<usize>) {
        match &self.issue {
            Issue::Invalid(PanelError::OutOfRange { row, column, .. })
            | Issue::Invalid(PanelError::NonFinite { row, column, .. }) => (Some(*row), Some(*column)),
            Issue::HighMissingColumn { column, .. } => (None, Some(*column)),
            Issue::HighMissingRow { row, .. } | Issue::ZeroRow { row, .. } => (Some(*row), None),
            _ => (None, None),
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.severity)?;
        match &self.issue {
            Issue::Invalid(e) => write!(f, "{e}"),
            Issue::HighMissingColumn {
                category,
                missing,
                total,
                ..
            } => write!(
                f,
                "category `{category}` is missing {missing}/{total} scores (fraction {:.3})",
                *missing as f64 / *total as f64
            ),
            Issue::HighMissingRow {
                entity,
                missing,
                total,
                ..
            } => write!(
                f,
                "entity `{entity}` is missing {missing}/{total} scores (fraction {:.3})",
                *missing as f64 / *total as f64
            ),
            Issue::ConstantColumns { categories } => {
                write!(f, "constant columns: ")?;
                for (k, c) in categories.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(c)?;
                }
                Ok(())
            }
            Issue::ZeroRow { entity, .. } => write!(f, "entity `{entity}` scores zero on every category"),
        }
    }
}

/// Every broken invariant, in a fixed order (sizes, ids, cells, rows,
/// columns, all-zero).
pub(crate) fn invariant_violations(panel: &ScorePanel) -> Vec<PanelError> {
    let mut out = Vec::new();
    let (ne, nc) = (panel.n_entities(), panel.n_categories());
    if ne < 2 {
        out.push(PanelError::TooFewEntities(ne));
    }
    if nc < 2 {
        out.push(PanelError::TooFewCategories(nc));
    }
    let mut seen = BTreeSet::new();
    for e in panel.entities() {
        if !seen.insert(e.as_str()) {
            out.push(PanelError::DuplicateEntity(e.clone()));
        }
    }
    let mut seen = BTreeSet::new();
    for c in panel.categories() {
        if !seen.insert(c.as_str()) {
            out.push(PanelError::DuplicateCategory(c.clone()));
        }
    }
    for i in 0..ne {
        for j in 0..nc {
            let Some(v) = panel.value(i, j) else { continue };
            if !v.is_finite() {
                out.push(PanelError::NonFinite {
                    entity: panel.entities()[i].clone(),
                    category: panel.categories()[j].clone(),
                    row: i,
                    column: j,
                });
            } else if !(0.0..=MAX_SCORE).contains(&v) {
                out.push(PanelError::OutOfRange {
                    entity: panel.entities()[i].clone(),
                    category: panel.categories()[j].clone(),
                    row: i,
                    column: j,
                    value: v,
                });
            }
        }
    }
    for i in 0..ne {
        if nc > 0 && (0..nc).all(|j| panel.is_missing(i, j)) {
            out.push(PanelError::AllMissingRow(panel.entities()[i].clone()));
        }
    }
    for j in 0..nc {
        if ne > 0 && (0..ne).all(|i| panel.is_missing(i, j)) {
            out.push(PanelError::AllMissingColumn(panel.categories()[j].clone()));
        }
    }
    let any_present = panel.missing_mask().iter().any(|m| !m);
    if any_present && panel.scores().as_slice().iter().all(|&x| x == 0.0) {
        out.push(PanelError::AllZero);
    }
    out
}

/// Lint a panel: invariant violations as errors, data-quality concerns as
/// warnings. The panel is only read.
pub fn validate_panel(panel: &ScorePanel) -> Vec<Finding> {
    let errors = invariant_violations(panel);
    let all_zero = errors.contains(&PanelError::AllZero);
    let mut findings: Vec<Finding> = errors.into_iter().map(Finding::error).collect();
    let (ne, nc) = (panel.n_entities(), panel.n_categories());

    for j in 0..nc {
        let missing = (0..ne).filter(|&i| panel.is_missing(i, j)).count();
        if missing < ne && missing as f64 / ne as f64 > MISSINGNESS_WARNING_THRESHOLD {
            findings.push(Finding::warning(Issue::HighMissingColumn {
                category: panel.categories()[j].clone(),
                column: j,
                missing,
                total: ne,
            }));
        }
    }
    for i in 0..ne {
        let missing = (0..nc).filter(|&j| panel.is_missing(i, j)).count();
        if missing < nc && missing as f64 / nc as f64 > MISSINGNESS_WARNING_THRESHOLD {
            findings.push(Finding::warning(Issue::HighMissingRow {
                entity: panel.entities()[i].clone(),
                row: i,
                missing,
                total: nc,
            }));
        }
    }

    let constant: Vec<String> = (0..nc)
        .filter(|&j| {
            let mut present = (0..ne).filter_map(|i| panel.value(i, j));
            match present.next() {
                Some(first) => {
                    let mut count = 1;
                    for v in present {
                        if v != first {
                            return false;
                        }
                        count += 1;
                    }
                    count >= 2
                }
                None => false,
            }
        })
        .map(|j| panel.categories()[j].clone())
        .collect();
    if !constant.is_empty() {
        findings.push(Finding::warning(Issue::ConstantColumns { categories: constant }));
    }

    if !all_zero {
        for i in 0..ne {
            let present: Vec<f64> = (0..nc).filter_map(|j| panel.value(i, j)).collect();
            if !present.is_empty() && present.iter().all(|&v| v == 0.0) {
                findings.push(Finding::warning(Issue::ZeroRow {
                    entity: panel.entities()[i].clone(),
                    row: i,
                }));
            }
        }
    }
    findings
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::string::ToString;
    use alloc::vec;

    fn ids(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    #[test]
    fn uniform_panel_warns_constant_columns_once() {
        let p = ScorePanel::new("y", ids("s", 36), ids("g", 15), vec![Some(100.0); 36 * 15]).unwrap();
        let findings = validate_panel(&p);
        assert_eq!(findings.iter().filter(|f| f.is_error()).count(), 0);
        assert_eq!(findings.len(), 1);
        assert_eq!(findings[0].code(), "constant_columns");
        match &findings[0].issue {
            Issue::ConstantColumns { categories } => assert_eq!(categories.len(), 15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn heavy_missing_column_reports_fraction() {
        let mut cells = Vec::new();
        for i in 0..36 {
            cells.push(Some(10.0 + i as f64));
            cells.push(if i < 6 { Some(50.0 + i as f64) } else { None });
        }
        let p = ScorePanel::new("y", ids("s", 36), ids("g", 2), cells).unwrap();
        let findings = validate_panel(&p);
        let w = findings
            .iter()
            .find(|f| f.code() == "high_missingness_column")
            .expect("warning present");
        // count/total oracle: 30 of 36 cells missing
        assert!((w.missing_fraction().unwrap() - 30.0 / 36.0).abs() < 1e-15);
        assert!(w.to_string().contains("0.833"));
        assert_eq!(w.location(), (None, Some(1)));
        assert!(!findings.iter().any(Finding::is_error));
    }

    #[test]
    fn half_missing_is_not_flagged() {
        let cells = vec![Some(1.0), Some(2.0), Some(3.0), None];
        let p = ScorePanel::new("y", ids("s", 2), ids("g", 2), cells).unwrap();
        assert!(validate_panel(&p).is_empty());
    }

    #[test]
    fn valid_varied_panel_has_no_errors() {
        let cells = (0..36 * 15).map(|k| Some(((k * 37) % 101) as f64)).collect();
        let p = ScorePanel::new("2024", ids("s", 36), ids("g", 15), cells).unwrap();
        assert!(validate_panel(&p).iter().all(|f| !f.is_error()));
    }

    #[test]
    fn unchecked_panel_surfaces_all_errors_without_mutation() {
        let p = ScorePanel::unchecked(
            "y",
            vec!["a".into(), "a".into()],
            ids("g", 2),
            vec![Some(105.0), Some(f64::NAN), Some(1.0), Some(2.0)],
        )
        .unwrap();
        let before = p.clone();
        let findings = validate_panel(&p);
        let codes: Vec<_> = findings.iter().map(Finding::code).collect();
        assert_eq!(codes, ["duplicate_entity", "out_of_range", "non_finite"]);
        assert_eq!(findings[1].location(), (Some(0), Some(0)));
        // NaN != NaN, so compare bit patterns
        assert_eq!(p.entities(), before.entities());
        assert!(p
            .scores()
            .as_slice()
            .iter()
            .zip(before.scores().as_slice())
            .all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn zero_row_is_a_warning() {
        let p = ScorePanel::from_rows("y", &["a", "b"], &["x", "y"], &[[0.0, 0.0], [1.0, 2.0]]).unwrap();
        let findings = validate_panel(&p);
        assert_eq!(findings.len(), 1);
        assert_eq!(findings[0].code(), "zero_row");
        assert_eq!(findings[0].severity, Severity::Warning);
    }
}
