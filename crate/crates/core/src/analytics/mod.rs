//! Derived quantities: category weights, weighted performance, rankings,
//! tertile profiles and multi-year evolution.

mod evolution;
mod groups;
mod ranking;
mod weights;

use alloc::string::String;

use thiserror::Error;

use crate::panel::AlignError;

pub use evolution::{
    rank_evolution, weights_evolution, LineageEvent, RankSeries, Trajectory, TrajectoryPoint,
    WeightsEvolution,
};
pub use groups::{tertile_groups, tertile_sizes, GroupProfile, GROUP_COUNT};
pub use ranking::{rank_correlation, rank_entities, spearman, RankBasis, RankEntry, RankTable};
pub use weights::{goal_weights, weighted_performance, GoalWeights, WeightedPerformance};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticsError {
    #[error("expected {expected} {what} values, found {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("category rosters differ (first difference at position {position})")]
    RosterMismatch { position: usize },
    #[error("rank tables cover different entities (e.g. `{entity}`)")]
    EntitySetMismatch { entity: String },
    #[error("{what} for `{id}` is {value}, expected a positive finite number")]
    NonPositive {
        what: &'static str,
        id: String,
        value: f64,
    },
    #[error("score for `{entity}` is not finite")]
    NonFinite { entity: String },
    #[error("correlation is undefined: one ranking is constant")]
    ConstantRanking,
    #[error("need at least {needed} entities, found {found}")]
    TooFewEntities { needed: usize, found: usize },
    #[error("aligning {from} -> {to}: {source}")]
    Alignment {
        from: String,
        to: String,
        #[source]
        source: AlignError,
    },
}
