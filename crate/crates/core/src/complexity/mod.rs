//! Degree indices, proximity and similarity matrices, spectral scores and
//! the fitness-complexity fixed point.
//!
//! Both score methods report results normalized to mean one, so spectral
//! and iterative scores are directly comparable.

mod eigen;
mod fitness;
mod network;
mod spectral;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

pub use eigen::{leading_eigenpairs, principal_eigenvector, Eigenpair};
pub use fitness::{fitness_step, run_fitness, IterationTrace, TAIL_WINDOW};
pub use network::{
    adjusted_ubiquity, degree_index, proximity, similarity, AdjustedUbiquity, DegreeIndex,
    ProximityMatrix, SimilarityPair,
};
pub use spectral::{genepy_analysis, genepy_scores, genepy_scores_with, SpectralAnalysis};

/// Default relative tolerance for both solvers.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default iteration cap for both solvers.
pub const DEFAULT_MAX_STEPS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Relative tolerance: eigen residual `‖Mv − λv‖∞ / λ` for the spectral
    /// solver, relative L∞ change of both vectors for the fitness iteration.
    pub tol: f64,
    pub max_steps: usize,
    /// When false, spectral scores are returned even if power iteration hits
    /// `max_steps`; the analysis records the non-convergence instead.
    pub require_convergence: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_steps: DEFAULT_MAX_STEPS,
            require_convergence: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Spectral,
    Iterative,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Spectral => "spectral",
            Method::Iterative => "iterative",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// Vector divided by its arithmetic mean.
    MeanOne,
}

/// Entity scores `D_s` and category scores `C_g` from either method.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexityScores {
    pub entity_scores: Vec<f64>,
    pub category_scores: Vec<f64>,
    /// Dominant eigenvalue of `U = N Nᵀ` (spectral method only).
    pub lambda_u: Option<f64>,
    /// Dominant eigenvalue of `V = Nᵀ N` (spectral method only).
    pub lambda_v: Option<f64>,
    pub normalization: Normalization,
    pub method: Method,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum EigenError {
    #[error("matrix is empty")]
    Empty,
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (relative asymmetry {asymmetry:e})")]
    Asymmetric { asymmetry: f64 },
    #[error("matrix entry ({row}, {column}) is negative or not finite")]
    InvalidEntry { row: usize, column: usize },
    #[error("matrix is all zero")]
    ZeroMatrix,
    #[error("power iteration did not converge in {steps} steps (residual {residual:e})")]
    NotConverged {
        steps: usize,
        residual: f64,
        /// Last iterate.
        estimate: Box<Eigenpair>,
    },
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ComplexityError {
    #[error("entity `{entity}` has zero total score; its degree k_s is 0")]
    DegenerateEntity { entity: String },
    #[error("category `{category}` has zero adjusted ubiquity")]
    DegenerateCategory { category: String },
    #[error("entity `{entity}` has non-positive fitness {value}; the complexity update would divide by it")]
    SingularUpdate { entity: String, value: f64 },
    #[error("expected {expected} {what} values, found {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{which}: {source}")]
    Eigen {
        which: &'static str,
        #[source]
        source: EigenError,
    },
}

impl ComplexityError {
    /// True for errors caused by a degenerate panel (as opposed to solver
    /// failure).
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            ComplexityError::DegenerateEntity { .. }
                | ComplexityError::DegenerateCategory { .. }
                | ComplexityError::SingularUpdate { .. }
        )
    }

    pub fn is_nonconvergence(&self) -> bool {
        matches!(
            self,
            ComplexityError::Eigen {
                source: EigenError::NotConverged { .. },
                ..
            }
        )
    }
}

/// Divide by the arithmetic mean. Caller guarantees a positive mean.
pub(crate) fn to_mean_one(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    for x in v.iter_mut() {
        *x /= mean;
    }
}

/// `‖a − b‖∞ / ‖a‖∞`.
pub(crate) fn relative_change(new: &[f64], old: &[f64]) -> f64 {
    let scale = new.iter().fold(0.0f64, |m, &x| m.max(crate::abs(x)));
    let diff = new
        .iter()
        .zip(old)
        .fold(0.0f64, |m, (a, b)| m.max(crate::abs(a - b)));
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}
