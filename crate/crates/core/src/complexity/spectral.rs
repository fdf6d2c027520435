use super::{
    adjusted_ubiquity, degree_index, principal_eigenvector, proximity, similarity, to_mean_one,
    AdjustedUbiquity, ComplexityError, ComplexityScores, DegreeIndex, Eigenpair, Method,
    Normalization, ProximityMatrix, SimilarityPair, SolverOptions,
};
use crate::panel::ScorePanel;

/// Every intermediate of the spectral pipeline for one panel.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralAnalysis {
    pub degree: DegreeIndex,
    pub ubiquity: AdjustedUbiquity,
    pub proximity: ProximityMatrix,
    pub similarity: SimilarityPair,
    /// Raw dominant eigenpair of `U`.
    pub entity_eigen: Eigenpair,
    /// Raw dominant eigenpair of `V`.
    pub category_eigen: Eigenpair,
    /// Mean-one rescaled eigenvectors.
    pub scores: ComplexityScores,
}

impl SpectralAnalysis {
    pub fn converged(&self) -> bool {
        self.entity_eigen.converged && self.category_eigen.converged
    }

    /// `|λ_U − λ_V| / λ_U`.
    pub fn spectrum_gap(&self) -> f64 {
        let (a, b) = (self.entity_eigen.value, self.category_eigen.value);
        crate::abs(a - b) / a
    }
}

/// Spectral scores with default solver options.
pub fn genepy_scores(panel: &ScorePanel) -> Result<ComplexityScores, ComplexityError> {
    genepy_scores_with(panel, &SolverOptions::default())
}

pub fn genepy_scores_with(
    panel: &ScorePanel,
    opts: &SolverOptions,
) -> Result<ComplexityScores, ComplexityError> {
    genepy_analysis(panel, opts).map(|a| a.scores)
}

/// Build `k_s`, `k'_g`, `N`, `U`, `V` and take the principal eigenvectors of
/// `U` (entities) and `V` (categories), each rescaled to mean one.
pub fn genepy_analysis(
    panel: &ScorePanel,
    opts: &SolverOptions,
) -> Result<SpectralAnalysis, ComplexityError> {
    let degree = degree_index(panel)?;
    let ubiquity = adjusted_ubiquity(panel, &degree)?;
    let proximity = proximity(panel, &degree, &ubiquity)?;
    let similarity = similarity(&proximity);

    let entity_eigen = principal_eigenvector(&similarity.u, opts)
        .map_err(|source| ComplexityError::Eigen { which: "U = N Nᵀ", source })?;
    let category_eigen = principal_eigenvector(&similarity.v, opts)
        .map_err(|source| ComplexityError::Eigen { which: "V = Nᵀ N", source })?;

    let mut d = entity_eigen.vector.clone();
    let mut c = category_eigen.vector.clone();
    to_mean_one(&mut d);
    to_mean_one(&mut c);

    let scores = ComplexityScores {
        entity_scores: d,
        category_scores: c,
        lambda_u: Some(entity_eigen.value),
        lambda_v: Some(category_eigen.value),
        normalization: Normalization::MeanOne,
        method: Method::Spectral,
    };
    Ok(SpectralAnalysis {
        degree,
        ubiquity,
        proximity,
        similarity,
        entity_eigen,
        category_eigen,
        scores,
    })
}
