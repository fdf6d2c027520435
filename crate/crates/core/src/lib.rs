//! Complexity-based rankings on weighted bipartite score panels.
//!
//! A [`ScorePanel`] holds one year's entity × category score matrix
//! (scores in `[0, 100]`, with a missing-cell mask). From it this crate
//! computes:
//!
//! * degree indices `k_s` (row sums) and the per-entity composite mean,
//! * adjusted ubiquity `k'_g = Σ_s I_sg / k_s`,
//! * the proximity matrix `N_sg = I_sg / (k_s k'_g)` and its two Gram
//!   matrices `U = N Nᵀ`, `V = Nᵀ N`,
//! * spectral scores: the principal eigenvectors of `U` (entities) and `V`
//!   (categories), rescaled to mean one,
//! * the nonlinear fitness-complexity fixed point, with a full trace,
//! * category weights `W_g = C_g / k'_g` and the derived rankings, tertile
//!   profiles and multi-year rank trajectories.
//!
//! The crate is `no_std` and needs only `alloc`. Parsing, file formats,
//! charts and the command-line driver live in the `genepy` crate.
//!
//! ```
//! use genepy_core::{complexity, ScorePanel};
//!
//! let panel = ScorePanel::from_rows(
//!     "2024",
//!     &["A", "B", "C"],
//!     &["g1", "g2"],
//!     &[&[2.0, 0.0], &[1.0, 1.0], &[0.0, 2.0]],
//! )
//! .unwrap();
//! let scores = complexity::genepy_scores(&panel).unwrap();
//! assert!(scores.entity_scores.iter().all(|d| (d - 1.0).abs() < 1e-9));
//! ```
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analytics;
pub mod complexity;
pub mod matrix;
pub mod panel;

pub use analytics::{
    GoalWeights, GroupProfile, RankBasis, RankEntry, RankSeries, RankTable, Trajectory,
    WeightedPerformance, WeightsEvolution,
};
pub use complexity::{
    AdjustedUbiquity, ComplexityError, ComplexityScores, DegreeIndex, Eigenpair, EigenError,
    IterationTrace, Method, ProximityMatrix, SimilarityPair, SolverOptions,
};
pub use matrix::Matrix;
pub use panel::{
    Alignment, EntityMap, Finding, IndicatorRecord, IndicatorTable, Lineage, MapRule, PanelError,
    ScorePanel, Severity,
};

/// `|x|` without pulling in `std`.
#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}
