use alloc::string::String;
use alloc::vec::Vec;

use super::AnalyticsError;
use crate::complexity::{AdjustedUbiquity, ComplexityScores};
use crate::panel::ScorePanel;

/// `W_g = C_g / k'_g` for one panel year.
#[derive(Clone, Debug, PartialEq)]
pub struct GoalWeights {
    pub year: String,
    pub categories: Vec<String>,
    pub weights: Vec<f64>,
}

impl GoalWeights {
    pub fn get(&self, category: &str) -> Option<f64> {
        self.categories
            .iter()
            .position(|c| c == category)
            .map(|j| self.weights[j])
    }

    /// Category ids sorted by descending weight, ties by id.
    pub fn ranking(&self) -> Vec<&str> {
        let mut idx: Vec<usize> = (0..self.weights.len()).collect();
        idx.sort_by(|&a, &b| {
            self.weights[b]
                .total_cmp(&self.weights[a])
                .then_with(|| self.categories[a].cmp(&self.categories[b]))
        });
        idx.into_iter().map(|j| self.categories[j].as_str()).collect()
    }
}

/// Entry-wise `C_g / k'_g`, labelled with the panel's year and categories.
pub fn goal_weights(
    panel: &ScorePanel,
    scores: &ComplexityScores,
    ubiq: &AdjustedUbiquity,
) -> Result<GoalWeights, AnalyticsError> {
    let n = panel.n_categories();
    for (what, found) in [
        ("category score", scores.category_scores.len()),
        ("adjusted ubiquity", ubiq.k_g_prime.len()),
    ] {
        if found != n {
            return Err(AnalyticsError::LengthMismatch {
                what,
                expected: n,
                found,
            });
        }
    }
    let mut weights = Vec::with_capacity(n);
    for (j, (c, k)) in scores.category_scores.iter().zip(&ubiq.k_g_prime).enumerate() {
        for (what, value) in [("category score", *c), ("adjusted ubiquity", *k)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(AnalyticsError::NonPositive {
                    what,
                    id: panel.categories()[j].clone(),
                    value,
                });
            }
        }
        weights.push(c / k);
    }
    Ok(GoalWeights {
        year: String::from(panel.year()),
        categories: panel.categories().to_vec(),
        weights,
    })
}

/// `I_sg · W_g`, with missing cells left missing.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPerformance {
    pub entities: Vec<String>,
    pub categories: Vec<String>,
    /// Row-major.
    pub values: Vec<Option<f64>>,
}

impl WeightedPerformance {
    #[inline]
    pub fn get(&self, row: usize, column: usize) -> Option<f64> {
        self.values[row * self.categories.len() + column]
    }

    pub fn row(&self, row: usize) -> &[Option<f64>] {
        let nc = self.categories.len();
        &self.values[row * nc..(row + 1) * nc]
    }
}

pub fn weighted_performance(
    panel: &ScorePanel,
    w: &GoalWeights,
) -> Result<WeightedPerformance, AnalyticsError> {
    if let Some(position) = roster_difference(panel.categories(), &w.categories) {
        return Err(AnalyticsError::RosterMismatch { position });
    }
    let values = (0..panel.n_entities())
        .flat_map(|i| (0..panel.n_categories()).map(move |j| (i, j)))
        .map(|(i, j)| panel.value(i, j).map(|x| x * w.weights[j]))
        .collect();
    Ok(WeightedPerformance {
        entities: panel.entities().to_vec(),
        categories: panel.categories().to_vec(),
        values,
    })
}

fn roster_difference(a: &[String], b: &[String]) -> Option<usize> {
    if a == b {
        return None;
    }
    Some(a.iter().zip(b).position(|(x, y)| x != y).unwrap_or(a.len().min(b.len())))
}
