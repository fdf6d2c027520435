use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::{PanelError, ScorePanel, MAX_SCORE};

/// One indicator reading. `value == None` declares the indicator not
/// applicable to this entity.
#[derive(Clone, Debug, PartialEq)]
pub struct IndicatorRecord {
    pub entity: String,
    pub category: String,
    pub indicator: String,
    pub value: Option<f64>,
}

/// Long-form indicator readings for one year.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IndicatorTable {
    pub year: String,
    pub records: Vec<IndicatorRecord>,
}

impl IndicatorTable {
    /// Number of distinct indicators per category, in first-appearance order.
    pub fn indicator_counts(&self) -> Vec<(String, usize)> {
        let mut order: Vec<&str> = Vec::new();
        let mut sets: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for r in &self.records {
            let set = sets.entry(r.category.as_str()).or_insert_with(|| {
                order.push(r.category.as_str());
                BTreeSet::new()
            });
            set.insert(r.indicator.as_str());
        }
        order
            .into_iter()
            .map(|c| (String::from(c), sets[c].len()))
            .collect()
    }
}

/// Average indicator readings into category scores.
///
/// Each cell is the arithmetic mean of the entity's applicable indicators in
/// that category; a cell whose indicators are all declared not applicable
/// becomes missing. Entities and categories keep first-appearance order.
/// Values are summed in sorted order, so the result does not depend on the
/// order in which indicators are listed.
pub fn aggregate_indicators(table: &IndicatorTable) -> Result<ScorePanel, PanelError> {
    if table.records.is_empty() {
        return Err(PanelError::EmptyIndicatorTable(table.year.clone()));
    }
    let mut entities: Vec<&str> = Vec::new();
    let mut categories: Vec<&str> = Vec::new();
    let mut entity_pos: BTreeMap<&str, usize> = BTreeMap::new();
    let mut category_pos: BTreeMap<&str, usize> = BTreeMap::new();
    let mut seen: BTreeSet<(&str, &str, &str)> = BTreeSet::new();
    // (entity, category) -> applicable values; an empty bucket means all NA
    let mut buckets: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();

    for r in &table.records {
        if !seen.insert((&r.entity, &r.category, &r.indicator)) {
            return Err(PanelError::DuplicateIndicator {
                entity: r.entity.clone(),
                category: r.category.clone(),
                indicator: r.indicator.clone(),
            });
        }
        if let Some(v) = r.value {
            if !v.is_finite() || !(0.0..=MAX_SCORE).contains(&v) {
                return Err(PanelError::IndicatorOutOfRange {
                    entity: r.entity.clone(),
                    category: r.category.clone(),
                    indicator: r.indicator.clone(),
                    value: v,
                });
            }
        }
        let i = *entity_pos.entry(&r.entity).or_insert_with(|| {
            entities.push(&r.entity);
            entities.len() - 1
        });
        let j = *category_pos.entry(&r.category).or_insert_with(|| {
            categories.push(&r.category);
            categories.len() - 1
        });
        let bucket = buckets.entry((i, j)).or_default();
        if let Some(v) = r.value {
            bucket.push(v);
        }
    }

    let mut cells = Vec::with_capacity(entities.len() * categories.len());
    for i in 0..entities.len() {
        for j in 0..categories.len() {
            let values = buckets.get_mut(&(i, j)).ok_or_else(|| PanelError::MissingPair {
                entity: String::from(entities[i]),
                category: String::from(categories[j]),
            })?;
            if values.is_empty() {
                cells.push(None);
            } else {
                values.sort_by(f64::total_cmp);
                let sum: f64 = values.iter().sum();
                cells.push(Some(sum / values.len() as f64));
            }
        }
    }
    ScorePanel::new(
        table.year.clone(),
        entities.into_iter().map(String::from).collect(),
        categories.into_iter().map(String::from).collect(),
        cells,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn rec(e: &str, c: &str, k: &str, v: Option<f64>) -> IndicatorRecord {
        IndicatorRecord {
            entity: e.into(),
            category: c.into(),
            indicator: k.into(),
            value: v,
        }
    }

    fn table(records: Vec<IndicatorRecord>) -> IndicatorTable {
        IndicatorTable {
            year: "2024".into(),
            records,
        }
    }

    /// Two entities, two goals; entity A goal 1 carries the indicators under test.
    fn with_cell(values: &[f64]) -> ScorePanel {
        let mut records: Vec<_> = values
            .iter()
            .enumerate()
            .map(|(k, &v)| rec("A", "1", &alloc::format!("k{k}"), Some(v)))
            .collect();
        records.push(rec("A", "2", "m", Some(10.0)));
        records.push(rec("B", "1", "k0", Some(20.0)));
        records.push(rec("B", "2", "m", Some(30.0)));
        aggregate_indicators(&table(records)).unwrap()
    }

    #[test]
    fn two_point_mean() {
        assert_eq!(with_cell(&[40.0, 60.0]).value(0, 0), Some(50.0));
    }

    #[test]
    fn single_indicator_is_identity() {
        assert_eq!(with_cell(&[73.0]).value(0, 0), Some(73.0));
    }

    #[test]
    fn three_point_mean() {
        // (0 + 50 + 100) / 3
        assert_eq!(with_cell(&[0.0, 50.0, 100.0]).value(0, 0), Some(50.0));
    }

    #[test]
    fn indicator_order_does_not_matter() {
        let a = with_cell(&[0.1, 0.7, 33.3, 99.9, 12.25]);
        let b = with_cell(&[99.9, 12.25, 0.1, 33.3, 0.7]);
        assert_eq!(a.value(0, 0).unwrap().to_bits(), b.value(0, 0).unwrap().to_bits());
    }

    #[test]
    fn not_applicable_becomes_missing() {
        let p = aggregate_indicators(&table(vec![
            rec("A", "1", "k", Some(10.0)),
            rec("A", "14", "w", None),
            rec("B", "1", "k", Some(20.0)),
            rec("B", "14", "w", Some(40.0)),
        ]))
        .unwrap();
        assert_eq!(p.categories(), ["1", "14"]);
        assert!(p.is_missing(0, 1));
        assert_eq!(p.value(1, 1), Some(40.0));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            aggregate_indicators(&table(vec![])),
            Err(PanelError::EmptyIndicatorTable(_))
        ));
        assert!(matches!(
            aggregate_indicators(&table(vec![rec("A", "1", "k", Some(101.0))])),
            Err(PanelError::IndicatorOutOfRange { .. })
        ));
        assert!(matches!(
            aggregate_indicators(&table(vec![
                rec("A", "1", "k", Some(1.0)),
                rec("A", "1", "k", Some(2.0))
            ])),
            Err(PanelError::DuplicateIndicator { .. })
        ));
        assert!(matches!(
            aggregate_indicators(&table(vec![
                rec("A", "1", "k", Some(1.0)),
                rec("B", "2", "k", Some(2.0))
            ])),
            Err(PanelError::MissingPair { .. })
        ));
    }

    #[test]
    fn counts_distinct_indicators_per_category() {
        let t = table(vec![
            rec("A", "1", "a", Some(1.0)),
            rec("A", "1", "b", Some(1.0)),
            rec("B", "1", "a", Some(1.0)),
            rec("A", "2", "c", Some(1.0)),
        ]);
        assert_eq!(t.indicator_counts(), vec![("1".into(), 2), ("2".into(), 1)]);
    }
}
