use alloc::string::String;
use alloc::vec::Vec;

use super::{weighted_performance, AnalyticsError, GoalWeights, RankTable, WeightedPerformance};
use crate::panel::ScorePanel;

pub const GROUP_COUNT: usize = 3;

/// Sizes of the three rank groups; earlier groups take the remainder.
pub fn tertile_sizes(n: usize) -> [usize; GROUP_COUNT] {
    let base = n / GROUP_COUNT;
    let extra = n % GROUP_COUNT;
    core::array::from_fn(|g| base + usize::from(g < extra))
}

/// Entities split into three groups by rank, with mean weighted-performance
/// curves per group and for everyone.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupProfile {
    pub categories: Vec<String>,
    /// Entity ids per group, best-ranked group first, in rank order.
    pub groups: [Vec<String>; GROUP_COUNT],
    /// Mean over each group's present cells; `None` where a group has no
    /// present cell for the category.
    pub group_curves: [Vec<Option<f64>>; GROUP_COUNT],
    pub national_curve: Vec<Option<f64>>,
    /// Per-entity weighted performance the curves were computed from.
    pub performance: WeightedPerformance,
}

impl GroupProfile {
    pub fn group_of(&self, entity: &str) -> Option<usize> {
        self.groups.iter().position(|g| g.iter().any(|e| e == entity))
    }
}

pub fn tertile_groups(
    table: &RankTable,
    panel: &ScorePanel,
    w: &GoalWeights,
) -> Result<GroupProfile, AnalyticsError> {
    let n = panel.n_entities();
    if n < GROUP_COUNT {
        return Err(AnalyticsError::TooFewEntities {
            needed: GROUP_COUNT,
            found: n,
        });
    }
    if table.len() != n {
        return Err(AnalyticsError::LengthMismatch {
            what: "ranked entity",
            expected: n,
            found: table.len(),
        });
    }
    if let Some(e) = table.entries.iter().find(|e| panel.entity_index(&e.entity).is_none()) {
        return Err(AnalyticsError::EntitySetMismatch {
            entity: e.entity.clone(),
        });
    }
    let performance = weighted_performance(panel, w)?;

    let sizes = tertile_sizes(n);
    let mut groups: [Vec<String>; GROUP_COUNT] = Default::default();
    let mut members: [Vec<usize>; GROUP_COUNT] = Default::default();
    let mut ranked = table.entries.iter();
    for g in 0..GROUP_COUNT {
        for e in ranked.by_ref().take(sizes[g]) {
            groups[g].push(e.entity.clone());
            members[g].push(panel.entity_index(&e.entity).expect("checked above"));
        }
    }

    let curve = |rows: &[usize]| -> Vec<Option<f64>> {
        (0..panel.n_categories())
            .map(|j| {
                let (sum, count) = rows
                    .iter()
                    .filter_map(|&i| performance.get(i, j))
                    .fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
                (count > 0).then(|| sum / count as f64)
            })
            .collect()
    };
    let group_curves = core::array::from_fn(|g| curve(&members[g]));
    let everyone: Vec<usize> = (0..n).collect();
    let national_curve = curve(&everyone);

    Ok(GroupProfile {
        categories: panel.categories().to_vec(),
        groups,
        group_curves,
        national_curve,
        performance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{rank_entities, RankBasis};
    use alloc::format;
    use alloc::vec;

    #[test]
    fn sizes_follow_remainder_rule() {
        assert_eq!(tertile_sizes(36), [12, 12, 12]);
        assert_eq!(tertile_sizes(4), [2, 1, 1]);
        assert_eq!(tertile_sizes(5), [2, 2, 1]);
        assert_eq!(tertile_sizes(3), [1, 1, 1]);
    }

    fn panel(n: usize, value: impl Fn(usize, usize) -> f64) -> ScorePanel {
        let ids: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let cats = vec!["g1".into(), "g2".into()];
        let cells = (0..n).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| Some(value(i, j))).collect();
        ScorePanel::new("t", ids, cats, cells).unwrap()
    }

    fn unit_weights(p: &ScorePanel) -> GoalWeights {
        GoalWeights {
            year: "t".into(),
            categories: p.categories().to_vec(),
            weights: vec![1.0; p.n_categories()],
        }
    }

    #[test]
    fn four_entities_split_two_one_one() {
        let p = panel(4, |i, j| 10.0 * (i + 1) as f64 + j as f64);
        let w = unit_weights(&p);
        let ks: Vec<f64> = (0..4).map(|i| p.scores().row(i).iter().sum()).collect();
        let t = rank_entities("t", p.entities(), &ks, RankBasis::Degree).unwrap();
        let g = tertile_groups(&t, &p, &w).unwrap();
        assert_eq!(g.groups[0], ["e3", "e2"]);
        assert_eq!(g.groups[1], ["e1"]);
        assert_eq!(g.groups[2], ["e0"]);
        assert_eq!(g.group_curves[0], [Some(35.0), Some(36.0)]);
        assert_eq!(g.national_curve, [Some(25.0), Some(26.0)]);
        assert_eq!(g.group_of("e1"), Some(1));
    }

    #[test]
    fn identical_rows_give_identical_curves() {
        let p = panel(6, |_, j| 40.0 + j as f64);
        let w = GoalWeights {
            weights: vec![0.5, 2.0],
            ..unit_weights(&p)
        };
        let t = rank_entities("t", p.entities(), &[1.0; 6], RankBasis::Degree).unwrap();
        let g = tertile_groups(&t, &p, &w).unwrap();
        for curve in &g.group_curves {
            assert_eq!(curve, &g.national_curve);
        }
        assert_eq!(g.national_curve, [Some(20.0), Some(82.0)]);
    }

    #[test]
    fn needs_three_entities() {
        let p = panel(2, |i, _| (i + 1) as f64);
        let t = rank_entities("t", p.entities(), &[1.0, 2.0], RankBasis::Degree).unwrap();
        assert!(matches!(
            tertile_groups(&t, &p, &unit_weights(&p)),
            Err(AnalyticsError::TooFewEntities { .. })
        ));
    }
}
