//! Nonlinear fitness-complexity iteration.
//!
//! ```text
//! D̃_s = Σ_g I_sg C_g          D_s = D̃_s / mean(D̃)
//! C̃_g = 1 / Σ_s (I_sg / D_s)   C_g = C̃_g / mean(C̃)
//! ```
//!
//! Both updates read the previous iterate. Iteration starts from
//! `D = C = 1`.
//!
//! Because each half of the update reads only the other half, the iterates
//! split into two interleaved chains, `D⁰ → C¹ → D² → …` and
//! `C⁰ → D¹ → C² → …`. Consecutive iterates therefore belong to different
//! chains and the per-step change oscillates with period two. Convergence is
//! judged on the larger of the last two per-step changes, which covers both
//! chains.

use alloc::vec;
use alloc::vec::Vec;

use super::{
    adjusted_ubiquity, degree_index, relative_change, to_mean_one, ComplexityError,
    ComplexityScores, Method, Normalization, SolverOptions,
};
use crate::panel::ScorePanel;

/// Number of trailing residuals covered by the monotonicity check.
pub const TAIL_WINDOW: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct IterationTrace {
    /// `(D^(n), C^(n))` for `n = 0..=steps`; index 0 is the start point.
    pub iterates: Vec<(Vec<f64>, Vec<f64>)>,
    /// Relative L∞ change of step `n` at index `n − 1`, the larger over `D`
    /// and `C`.
    pub step_changes: Vec<f64>,
    /// Residual after step `n` at index `n − 1`: the larger of the last two
    /// step changes.
    pub residuals: Vec<f64>,
    pub converged: bool,
    pub steps: usize,
    pub final_residual: f64,
}

impl IterationTrace {
    /// True when the last [`TAIL_WINDOW`] residuals never increase.
    pub fn tail_is_monotone(&self) -> bool {
        let start = self.residuals.len().saturating_sub(TAIL_WINDOW);
        self.residuals[start..].windows(2).all(|w| w[1] <= w[0])
    }
}

/// One application of the update, including both mean-one normalizations.
pub fn fitness_step(
    panel: &ScorePanel,
    fitness: &[f64],
    complexity: &[f64],
) -> Result<(Vec<f64>, Vec<f64>), ComplexityError> {
    let (ne, nc) = (panel.n_entities(), panel.n_categories());
    if fitness.len() != ne {
        return Err(ComplexityError::LengthMismatch {
            what: "fitness",
            expected: ne,
            found: fitness.len(),
        });
    }
    if complexity.len() != nc {
        return Err(ComplexityError::LengthMismatch {
            what: "complexity",
            expected: nc,
            found: complexity.len(),
        });
    }
    if let Some(i) = fitness.iter().position(|&d| !(d > 0.0) || !d.is_finite()) {
        return Err(ComplexityError::SingularUpdate {
            entity: panel.entities()[i].clone(),
            value: fitness[i],
        });
    }
    let scores = panel.scores();

    let mut d = scores.mul_vec(complexity);
    if let Some(i) = d.iter().position(|&x| !(x > 0.0)) {
        return Err(ComplexityError::DegenerateEntity {
            entity: panel.entities()[i].clone(),
        });
    }

    let mut c = vec![0.0; nc];
    for (j, slot) in c.iter_mut().enumerate() {
        let denom: f64 = scores.column(j).zip(fitness).map(|(x, f)| x / f).sum();
        if !(denom > 0.0) {
            return Err(ComplexityError::DegenerateCategory {
                category: panel.categories()[j].clone(),
            });
        }
        *slot = 1.0 / denom;
    }

    to_mean_one(&mut d);
    to_mean_one(&mut c);
    Ok((d, c))
}

/// Iterate [`fitness_step`] from `D = C = 1` until both vectors changed by at
/// most `tol` (relative L∞) in each of the last two steps, or `max_steps` is
/// reached.
///
/// Non-convergence is not an error: the last iterate is returned and the
/// trace is flagged. `require_convergence` is ignored here.
pub fn run_fitness(
    panel: &ScorePanel,
    opts: &SolverOptions,
) -> Result<(ComplexityScores, IterationTrace), ComplexityError> {
    // surfaces degenerate rows and columns with a named error up front
    let degree = degree_index(panel)?;
    adjusted_ubiquity(panel, &degree)?;

    let mut d = vec![1.0; panel.n_entities()];
    let mut c = vec![1.0; panel.n_categories()];
    let mut iterates = vec![(d.clone(), c.clone())];
    let mut step_changes: Vec<f64> = Vec::new();
    let mut residuals = Vec::new();
    let mut converged = false;

    while residuals.len() < opts.max_steps {
        let (nd, nc) = fitness_step(panel, &d, &c)?;
        let change = relative_change(&nd, &d).max(relative_change(&nc, &c));
        let r = step_changes.last().map_or(change, |&prev| prev.max(change));
        step_changes.push(change);
        residuals.push(r);
        iterates.push((nd.clone(), nc.clone()));
        d = nd;
        c = nc;
        if r <= opts.tol {
            converged = true;
            break;
        }
    }

    let steps = residuals.len();
    let final_residual = residuals.last().copied().unwrap_or(0.0);
    let scores = ComplexityScores {
        entity_scores: d,
        category_scores: c,
        lambda_u: None,
        lambda_v: None,
        normalization: Normalization::MeanOne,
        method: Method::Iterative,
    };
    Ok((
        scores,
        IterationTrace {
            iterates,
            step_changes,
            residuals,
            converged,
            steps,
            final_residual,
        },
    ))
}
