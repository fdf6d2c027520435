//! Score panels: one year's entity × category matrix plus its labels.
//!
//! Missing cells are kept in a boolean mask and stored as `0.0` in the dense
//! score matrix, so every downstream sum treats them as non-contributing.

mod align;
mod indicators;
mod validate;

use alloc::borrow::ToOwned;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::matrix::Matrix;

pub use align::{align_panels, align_rosters, AlignError, Alignment, EntityMap, Lineage, Link, MapRule};
pub use indicators::{aggregate_indicators, IndicatorRecord, IndicatorTable};
pub use validate::{validate_panel, Finding, Issue, Severity, MISSINGNESS_WARNING_THRESHOLD};

/// Inclusive upper bound for a score.
pub const MAX_SCORE: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PanelError {
    #[error("expected {expected} cells, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("panel needs at least 2 entities, found {0}")]
    TooFewEntities(usize),
    #[error("panel needs at least 2 categories, found {0}")]
    TooFewCategories(usize),
    #[error("duplicate entity id `{0}`")]
    DuplicateEntity(String),
    #[error("duplicate category id `{0}`")]
    DuplicateCategory(String),
    #[error("score {value} for `{entity}` / `{category}` (row {row}, column {column}) is outside [0, 100]")]
    OutOfRange {
        entity: String,
        category: String,
        row: usize,
        column: usize,
        value: f64,
    },
    #[error("score for `{entity}` / `{category}` (row {row}, column {column}) is not finite")]
    NonFinite {
        entity: String,
        category: String,
        row: usize,
        column: usize,
    },
    #[error("entity `{0}` has no reported scores")]
    AllMissingRow(String),
    #[error("category `{0}` has no reported scores")]
    AllMissingColumn(String),
    #[error("every score is zero, so every entity is degenerate")]
    AllZero,
    #[error("indicator table for {0} is empty")]
    EmptyIndicatorTable(String),
    #[error("indicator `{indicator}` reported twice for `{entity}` / `{category}`")]
    DuplicateIndicator {
        entity: String,
        category: String,
        indicator: String,
    },
    #[error("indicator `{indicator}` for `{entity}` / `{category}` has value {value} outside [0, 100]")]
    IndicatorOutOfRange {
        entity: String,
        category: String,
        indicator: String,
        value: f64,
    },
    #[error("no indicator records for `{entity}` / `{category}`")]
    MissingPair { entity: String, category: String },
}

impl PanelError {
    /// True for errors that make the panel mathematically degenerate rather
    /// than malformed.
    pub fn is_degenerate(&self) -> bool {
        matches!(self, PanelError::AllZero)
    }
}

/// One year's entity × category score matrix.
///
/// Panels built with [`ScorePanel::new`] (or [`ScorePanel::from_rows`])
/// satisfy every invariant: ids unique, at least two entities and two
/// categories, every present score finite and in `[0, 100]`, no all-missing
/// row or column, and not all scores zero. [`ScorePanel::unchecked`] skips
/// those checks so that [`validate_panel`] can report on raw input.
#[derive(Clone, Debug, PartialEq)]
pub struct ScorePanel {
    year: String,
    entities: Vec<String>,
    categories: Vec<String>,
    scores: Matrix,
    missing: Vec<bool>,
}

impl ScorePanel {
    /// Validated constructor. `cells` is row-major, `None` marks a missing cell.
    pub fn new(
        year: impl Into<String>,
        entities: Vec<String>,
        categories: Vec<String>,
        cells: Vec<Option<f64>>,
    ) -> Result<Self, PanelError> {
        let panel = Self::unchecked(year, entities, categories, cells)?;
        match validate::invariant_violations(&panel).into_iter().next() {
            Some(err) => Err(err),
            None => Ok(panel),
        }
    }

    /// Build without enforcing the panel invariants; only the cell count is
    /// checked.
    pub fn unchecked(
        year: impl Into<String>,
        entities: Vec<String>,
        categories: Vec<String>,
        cells: Vec<Option<f64>>,
    ) -> Result<Self, PanelError> {
        let expected = entities.len() * categories.len();
        if cells.len() != expected {
            return Err(PanelError::ShapeMismatch {
                expected,
                found: cells.len(),
            });
        }
        let missing: Vec<bool> = cells.iter().map(Option::is_none).collect();
        let data = cells.into_iter().map(|c| c.unwrap_or(0.0)).collect();
        let scores = Matrix::from_vec(entities.len(), categories.len(), data)
            .expect("cell count checked above");
        Ok(Self {
            year: year.into(),
            entities,
            categories,
            scores,
            missing,
        })
    }

    /// Validated constructor for complete panels given as rows.
    pub fn from_rows<R: AsRef<[f64]>>(
        year: &str,
        entities: &[&str],
        categories: &[&str],
        rows: &[R],
    ) -> Result<Self, PanelError> {
        let cells: Vec<Option<f64>> = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().copied().map(Some))
            .collect();
        Self::new(
            year,
            entities.iter().map(|&s| s.to_owned()).collect(),
            categories.iter().map(|&s| s.to_owned()).collect(),
            cells,
        )
    }

    pub fn year(&self) -> &str {
        &self.year
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    /// Dense scores with missing cells stored as `0.0`.
    pub fn scores(&self) -> &Matrix {
        &self.scores
    }

    /// Row-major missing-cell mask.
    pub fn missing_mask(&self) -> &[bool] {
        &self.missing
    }

    #[inline]
    pub fn n_entities(&self) -> usize {
        self.entities.len()
    }

    #[inline]
    pub fn n_categories(&self) -> usize {
        self.categories.len()
    }

    #[inline]
    pub fn is_missing(&self, row: usize, column: usize) -> bool {
        self.missing[row * self.categories.len() + column]
    }

    /// The score at `(row, column)`, or `None` when missing.
    #[inline]
    pub fn value(&self, row: usize, column: usize) -> Option<f64> {
        (!self.is_missing(row, column)).then(|| self.scores[(row, column)])
    }

    pub fn entity_index(&self, id: &str) -> Option<usize> {
        self.entities.iter().position(|e| e == id)
    }

    pub fn category_index(&self, id: &str) -> Option<usize> {
        self.categories.iter().position(|c| c == id)
    }

    /// Row-major cells with `None` for missing entries.
    pub fn cells(&self) -> Vec<Option<f64>> {
        (0..self.n_entities())
            .flat_map(|i| (0..self.n_categories()).map(move |j| (i, j)))
            .map(|(i, j)| self.value(i, j))
            .collect()
    }

    /// A panel whose entity `k` is this panel's entity `order[k]`.
    ///
    /// Used for permutations and subsets; the result is not re-validated.
    pub fn reorder_entities(&self, order: &[usize]) -> Self {
        let nc = self.n_categories();
        let entities = order.iter().map(|&i| self.entities[i].clone()).collect();
        let missing = order
            .iter()
            .flat_map(|&i| self.missing[i * nc..(i + 1) * nc].iter().copied())
            .collect();
        Self {
            year: self.year.clone(),
            entities,
            categories: self.categories.clone(),
            scores: self.scores.permute_rows(order),
            missing,
        }
    }

    /// A panel whose category `k` is this panel's category `order[k]`.
    pub fn reorder_categories(&self, order: &[usize]) -> Self {
        let ne = self.n_entities();
        let nc = self.n_categories();
        let categories = order.iter().map(|&j| self.categories[j].clone()).collect();
        let mut data = Vec::with_capacity(ne * order.len());
        let mut missing = Vec::with_capacity(ne * order.len());
        for i in 0..ne {
            for &j in order {
                data.push(self.scores[(i, j)]);
                missing.push(self.missing[i * nc + j]);
            }
        }
        Self {
            year: self.year.clone(),
            entities: self.entities.clone(),
            categories,
            scores: Matrix::from_vec(ne, order.len(), data).expect("sized above"),
            missing,
        }
    }

    /// Every score multiplied by `factor`; mask and labels unchanged. The
    /// result is not re-validated.
    pub fn scaled(&self, factor: f64) -> Self {
        let data = self.scores.as_slice().iter().map(|x| x * factor).collect();
        Self {
            scores: Matrix::from_vec(self.n_entities(), self.n_categories(), data)
                .expect("same shape"),
            ..self.clone()
        }
    }
}
