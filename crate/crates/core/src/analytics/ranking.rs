use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::AnalyticsError;

/// What a rank table orders entities by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RankBasis {
    /// Row sum `k_s`.
    Degree,
    /// `k_s / applicable_count`.
    CompositeMean,
    /// Spectral `D_s`.
    Complexity,
    /// Iterative `D_s`.
    Fitness,
}

impl RankBasis {
    pub const ALL: [RankBasis; 4] = [
        RankBasis::Degree,
        RankBasis::CompositeMean,
        RankBasis::Complexity,
        RankBasis::Fitness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RankBasis::Degree => "k_s",
            RankBasis::CompositeMean => "composite_mean",
            RankBasis::Complexity => "D_s",
            RankBasis::Fitness => "D_s_iterative",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "k_s" | "ks" | "degree" => Some(RankBasis::Degree),
            "composite_mean" | "mean" => Some(RankBasis::CompositeMean),
            "D_s" | "d_s" | "ds" | "spectral" => Some(RankBasis::Complexity),
            "D_s_iterative" | "d_s_iterative" | "iterative" | "fitness" => Some(RankBasis::Fitness),
            _ => None,
        }
    }
}

impl fmt::Display for RankBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankEntry {
    pub entity: String,
    pub score: f64,
    /// 1 = highest score.
    pub rank: usize,
    /// Another entity has exactly the same score; the order between them
    /// was decided by entity id.
    pub tied: bool,
}

/// Entities in rank order.
#[derive(Clone, Debug, PartialEq)]
pub struct RankTable {
    pub year: String,
    pub basis: RankBasis,
    pub entries: Vec<RankEntry>,
}

impl RankTable {
    pub fn rank_of(&self, entity: &str) -> Option<usize> {
        self.entries.iter().find(|e| e.entity == entity).map(|e| e.rank)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn has_ties(&self) -> bool {
        self.entries.iter().any(|e| e.tied)
    }

    /// Restrict to `keep` and re-rank the survivors with the same rules.
    pub fn restricted_to(&self, keep: &[&str]) -> RankTable {
        let (ids, values): (Vec<String>, Vec<f64>) = self
            .entries
            .iter()
            .filter(|e| keep.contains(&e.entity.as_str()))
            .map(|e| (e.entity.clone(), e.score))
            .unzip();
        rank_entities(&self.year, &ids, &values, self.basis).expect("scores already validated")
    }
}

/// Rank entities by descending score. Equal scores are ordered by entity id
/// (byte-wise lexicographic) and flagged as tied.
pub fn rank_entities<S: AsRef<str>>(
    year: &str,
    entities: &[S],
    values: &[f64],
    basis: RankBasis,
) -> Result<RankTable, AnalyticsError> {
    if entities.len() != values.len() {
        return Err(AnalyticsError::LengthMismatch {
            what: "score",
            expected: entities.len(),
            found: values.len(),
        });
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(AnalyticsError::NonFinite {
            entity: String::from(entities[i].as_ref()),
        });
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .total_cmp(&values[a])
            .then_with(|| entities[a].as_ref().cmp(entities[b].as_ref()))
    });
    let entries = order
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let tied = (k > 0 && values[order[k - 1]] == values[i])
                || (k + 1 < order.len() && values[order[k + 1]] == values[i]);
            RankEntry {
                entity: String::from(entities[i].as_ref()),
                score: values[i],
                rank: k + 1,
                tied,
            }
        })
        .collect();
    Ok(RankTable {
        year: String::from(year),
        basis,
        entries,
    })
}

/// Average ranks in descending order of value (rank 1 = largest).
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut ranks = alloc::vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Spearman's rho between two paired samples: the Pearson correlation of
/// their average ranks.
pub fn spearman(a: &[f64], b: &[f64]) -> Result<f64, AnalyticsError> {
    if a.len() != b.len() {
        return Err(AnalyticsError::LengthMismatch {
            what: "paired",
            expected: a.len(),
            found: b.len(),
        });
    }
    let ra = average_ranks(a);
    let rb = average_ranks(b);
    let n = ra.len() as f64;
    // ranks 1..=n always average to (n+1)/2
    let mean = (n + 1.0) / 2.0;
    let (mut cov, mut va, mut vb) = (0.0, 0.0, 0.0);
    for (x, y) in ra.iter().zip(&rb) {
        cov += (x - mean) * (y - mean);
        va += (x - mean) * (x - mean);
        vb += (y - mean) * (y - mean);
    }
    if va == 0.0 || vb == 0.0 {
        return Err(AnalyticsError::ConstantRanking);
    }
    Ok((cov / libm::sqrt(va * vb)).clamp(-1.0, 1.0))
}

/// Spearman's rho between two rank tables over the same entity set, with
/// average ranks for tied scores.
pub fn rank_correlation(a: &RankTable, b: &RankTable) -> Result<f64, AnalyticsError> {
    let scores_b: BTreeMap<&str, f64> = b.entries.iter().map(|e| (e.entity.as_str(), e.score)).collect();
    if a.len() != b.len() {
        let missing = b
            .entries
            .iter()
            .find(|e| a.rank_of(&e.entity).is_none())
            .or_else(|| a.entries.iter().find(|e| !scores_b.contains_key(e.entity.as_str())))
            .map(|e| e.entity.clone())
            .unwrap_or_default();
        return Err(AnalyticsError::EntitySetMismatch { entity: missing });
    }
    let mut xs = Vec::with_capacity(a.len());
    let mut ys = Vec::with_capacity(a.len());
    for e in &a.entries {
        let Some(&y) = scores_b.get(e.entity.as_str()) else {
            return Err(AnalyticsError::EntitySetMismatch {
                entity: e.entity.clone(),
            });
        };
        xs.push(e.score);
        ys.push(y);
    }
    spearman(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec;

    #[test]
    fn descending_ranks() {
        let t = rank_entities("t", &["a", "b"], &[1.5352, 0.4648], RankBasis::Complexity).unwrap();
        assert_eq!(t.rank_of("a"), Some(1));
        assert_eq!(t.rank_of("b"), Some(2));
        assert!(!t.has_ties());
    }

    #[test]
    fn ties_break_by_id() {
        let t = rank_entities("t", &["zeta", "alpha", "mid"], &[5.0, 5.0, 9.0], RankBasis::Degree).unwrap();
        let order: Vec<_> = t.entries.iter().map(|e| (e.entity.as_str(), e.rank, e.tied)).collect();
        assert_eq!(order, [("mid", 1, false), ("alpha", 2, true), ("zeta", 3, true)]);
    }

    #[test]
    fn thirty_six_scores_form_a_permutation() {
        let ids: Vec<String> = (0..36).map(|i| format!("S{i:02}")).collect();
        let vals: Vec<f64> = (0..36).map(|i| ((i * 7) % 36) as f64 / 3.0).collect();
        let t = rank_entities("2024", &ids, &vals, RankBasis::Degree).unwrap();
        let mut ranks: Vec<_> = t.entries.iter().map(|e| e.rank).collect();
        ranks.sort_unstable();
        assert_eq!(ranks, (1..=36).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(
            rank_entities("t", &["a", "b"], &[1.0, f64::NAN], RankBasis::Degree),
            Err(AnalyticsError::NonFinite { .. })
        ));
    }

    fn table(ids: &[&str], vals: &[f64]) -> RankTable {
        rank_entities("t", ids, vals, RankBasis::Degree).unwrap()
    }

    #[test]
    fn spearman_cases() {
        let ids = ["a", "b", "c", "d"];
        let a = table(&ids, &[4.0, 3.0, 2.0, 1.0]);
        assert_eq!(rank_correlation(&a, &a).unwrap(), 1.0);
        let rev = table(&ids, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(rank_correlation(&a, &rev).unwrap(), -1.0);
        // ranks (1,2,3,4) vs (2,1,4,3): 1 − 6·4/60 = 0.6
        let b = table(&ids, &[3.0, 4.0, 1.0, 2.0]);
        assert!((rank_correlation(&a, &b).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn spearman_with_ties_uses_average_ranks() {
        assert_eq!(average_ranks(&[3.0, 1.0, 3.0, 2.0]), vec![1.5, 4.0, 1.5, 3.0]);
        let rho = spearman(&[1.0, 2.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 4.0]).unwrap();
        // Pearson of (4, 2.5, 2.5, 1) and (4, 3, 2, 1) = 4.5 / sqrt(4.5 * 5)
        assert!((rho - 4.5 / (4.5f64 * 5.0).sqrt()).abs() < 1e-15);
        assert_eq!(spearman(&[1.0, 1.0], &[1.0, 2.0]), Err(AnalyticsError::ConstantRanking));
    }

    #[test]
    fn entity_sets_must_match() {
        let a = table(&["a", "b"], &[1.0, 2.0]);
        let b = table(&["a", "c"], &[1.0, 2.0]);
        assert_eq!(
            rank_correlation(&a, &b),
            Err(AnalyticsError::EntitySetMismatch { entity: "b".into() })
        );
        let c = table(&["a", "b", "c"], &[1.0, 2.0, 3.0]);
        assert!(matches!(rank_correlation(&a, &c), Err(AnalyticsError::EntitySetMismatch { .. })));
    }

    #[test]
    fn restriction_reranks() {
        let t = table(&["a", "b", "c"], &[3.0, 2.0, 1.0]);
        let r = t.restricted_to(&["a", "c"]);
        assert_eq!(r.rank_of("c"), Some(2));
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn basis_names_round_trip() {
        for b in RankBasis::ALL {
            assert_eq!(RankBasis::parse(b.as_str()), Some(b));
        }
    }
}
