//! Input loading and the per-year computation shared by the commands.

use genepy_core::analytics::{goal_weights, rank_entities, GoalWeights, RankBasis, RankTable};
use genepy_core::complexity::{adjusted_ubiquity, degree_index, genepy_analysis, run_fitness};
use genepy_core::panel::aggregate_indicators;
use genepy_core::{
    AdjustedUbiquity, ComplexityScores, DegreeIndex, EntityMap, IterationTrace, ScorePanel, SolverOptions,
};

use super::{read, CliError, IndicatorInput, MapInput, PanelInput};
use crate::io::{parse_entity_map, parse_indicators, parse_panel};
use crate::report::SolverRow;

/// Panels in chronological order: `--panel` flags as given, then the
/// indicator-derived panel.
pub(crate) fn load_panels(
    panels: &[PanelInput],
    indicators: Option<&IndicatorInput>,
) -> Result<Vec<ScorePanel>, CliError> {
    let mut out: Vec<ScorePanel> = Vec::new();
    for p in panels {
        let text = read(&p.path)?;
        let panel = parse_panel(&text, &p.year).map_err(|source| CliError::Parse {
            path: p.path.clone(),
            source,
        })?;
        out.push(panel);
    }
    if let Some(ind) = indicators {
        let text = read(&ind.path)?;
        let parse_err = |source| CliError::Parse {
            path: ind.path.clone(),
            source,
        };
        let table = parse_indicators(&text, &ind.year).map_err(parse_err)?;
        let panel = aggregate_indicators(&table).map_err(|e| parse_err(e.into()))?;
        out.push(panel);
    }
    for (k, p) in out.iter().enumerate() {
        if out[..k].iter().any(|q| q.year() == p.year()) {
            return Err(CliError::Usage(format!("year `{}` is given twice", p.year())));
        }
    }
    Ok(out)
}

/// One map per consecutive pair of years; pairs without a `--entity-map`
/// get the empty map.
pub(crate) fn load_maps(years: &[&str], maps: &[MapInput]) -> Result<Vec<EntityMap>, CliError> {
    let mut out = vec![None; years.len().saturating_sub(1)];
    for m in maps {
        let k = years
            .windows(2)
            .position(|w| w[0] == m.from && w[1] == m.to)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "--entity-map {}->{}: not a pair of consecutive input years ({})",
                    m.from,
                    m.to,
                    years.join(", ")
                ))
            })?;
        if out[k].is_some() {
            return Err(CliError::Usage(format!("--entity-map {}->{} is given twice", m.from, m.to)));
        }
        let text = read(&m.path)?;
        let map = parse_entity_map(&text).map_err(|source| CliError::Parse {
            path: m.path.clone(),
            source,
        })?;
        out[k] = Some(map);
    }
    Ok(out.into_iter().map(Option::unwrap_or_default).collect())
}

#[derive(Clone, Debug)]
pub(crate) struct SpectralRun {
    pub scores: ComplexityScores,
    pub converged: bool,
    pub steps: usize,
    pub residual: f64,
}

/// Everything computed for one year.
#[derive(Clone, Debug)]
pub(crate) struct YearRun {
    pub panel: ScorePanel,
    pub degree: DegreeIndex,
    pub ubiquity: AdjustedUbiquity,
    pub spectral: Option<SpectralRun>,
    pub iterative: Option<(ComplexityScores, IterationTrace)>,
    /// From spectral `C_g` when available, else iterative.
    pub weights: GoalWeights,
    /// One table per available basis, in [`RankBasis::ALL`] order.
    pub ranks: Vec<RankTable>,
}

impl YearRun {
    pub fn year(&self) -> &str {
        self.panel.year()
    }

    pub fn rank(&self, basis: RankBasis) -> Option<&RankTable> {
        self.ranks.iter().find(|t| t.basis == basis)
    }

    /// Complexity basis used for charts and rank evolution.
    pub fn primary_basis(&self) -> RankBasis {
        if self.spectral.is_some() {
            RankBasis::Complexity
        } else {
            RankBasis::Fitness
        }
    }

    pub fn primary(&self) -> &RankTable {
        self.rank(self.primary_basis()).expect("primary basis is always ranked")
    }

    pub fn solver_rows(&self) -> Vec<SolverRow> {
        let mut rows = Vec::new();
        if let Some(s) = &self.spectral {
            rows.push(SolverRow {
                year: self.year().to_owned(),
                method: "spectral".into(),
                converged: s.converged,
                steps: s.steps,
                residual: s.residual,
                lambda_u: s.scores.lambda_u,
                lambda_v: s.scores.lambda_v,
            });
        }
        if let Some((_, t)) = &self.iterative {
            rows.push(SolverRow {
                year: self.year().to_owned(),
                method: "iterative".into(),
                converged: t.converged,
                steps: t.steps,
                residual: t.final_residual,
                lambda_u: None,
                lambda_v: None,
            });
        }
        rows
    }
}

pub(crate) fn run_year(
    panel: ScorePanel,
    spectral: bool,
    iterative: bool,
    opts: &SolverOptions,
) -> Result<YearRun, CliError> {
    let year = panel.year().to_owned();
    let cx = |source| CliError::Complexity {
        year: year.clone(),
        source,
    };
    let an = |source| CliError::Analytics {
        year: year.clone(),
        source,
    };
    let degree = degree_index(&panel).map_err(cx)?;
    let ubiquity = adjusted_ubiquity(&panel, &degree).map_err(cx)?;

    let spectral = if spectral {
        let a = genepy_analysis(&panel, opts).map_err(cx)?;
        Some(SpectralRun {
            converged: a.converged(),
            steps: a.entity_eigen.steps.max(a.category_eigen.steps),
            residual: a.entity_eigen.residual.max(a.category_eigen.residual),
            scores: a.scores,
        })
    } else {
        None
    };
    let iterative = if iterative {
        let (scores, trace) = run_fitness(&panel, opts).map_err(cx)?;
        if !trace.converged && opts.require_convergence {
            return Err(CliError::NotConverged {
                year,
                method: "iterative",
                steps: trace.steps,
                residual: trace.final_residual,
            });
        }
        Some((scores, trace))
    } else {
        None
    };

    let basis_scores = spectral
        .as_ref()
        .map(|s| &s.scores)
        .or(iterative.as_ref().map(|(s, _)| s))
        .expect("at least one method runs");
    let weights = goal_weights(&panel, basis_scores, &ubiquity).map_err(an)?;

    let mut ranks = Vec::new();
    for basis in RankBasis::ALL {
        let values: Option<&[f64]> = match basis {
            RankBasis::Degree => Some(&degree.k_s),
            RankBasis::CompositeMean => Some(&degree.composite_mean),
            RankBasis::Complexity => spectral.as_ref().map(|s| s.scores.entity_scores.as_slice()),
            RankBasis::Fitness => iterative.as_ref().map(|(s, _)| s.entity_scores.as_slice()),
        };
        if let Some(v) = values {
            ranks.push(rank_entities(&year, panel.entities(), v, basis).map_err(an)?);
        }
    }

    Ok(YearRun {
        panel,
        degree,
        ubiquity,
        spectral,
        iterative,
        weights,
        ranks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked() -> ScorePanel {
        ScorePanel::from_rows("t", &["a", "b", "c"], &["x", "y"], &[[2.0, 0.0], [1.0, 1.0], [0.0, 2.0]]).unwrap()
    }

    #[test]
    fn both_methods_rank_every_basis() {
        let r = run_year(worked(), true, true, &SolverOptions::default()).unwrap();
        assert_eq!(r.ranks.len(), 4);
        assert_eq!(r.primary_basis(), RankBasis::Complexity);
        assert_eq!(r.solver_rows().len(), 2);
        assert!(r.weights.weights.iter().all(|w| (w - 2.0 / 3.0).abs() < 1e-9));
    }

    #[test]
    fn iterative_only_falls_back() {
        let r = run_year(worked(), false, true, &SolverOptions::default()).unwrap();
        assert_eq!(r.primary_basis(), RankBasis::Fitness);
        assert!(r.rank(RankBasis::Complexity).is_none());
    }

    #[test]
    fn nonconvergence_is_its_own_error() {
        let p = ScorePanel::from_rows("t", &["a", "b", "c"], &["x", "y"], &[[9.0, 1.0], [1.0, 1.0], [3.0, 7.0]]).unwrap();
        let strict = SolverOptions {
            tol: 1e-15,
            max_steps: 2,
            require_convergence: true,
        };
        let e = run_year(p.clone(), false, true, &strict).unwrap_err();
        assert_eq!(e.exit_code(), super::super::EXIT_NONCONVERGED);
        let lax = SolverOptions {
            require_convergence: false,
            ..strict
        };
        let r = run_year(p, true, true, &lax).unwrap();
        assert!(r.solver_rows().iter().all(|s| !s.converged));
    }

    #[test]
    fn maps_must_join_consecutive_years() {
        let m: MapInput = "2018->2020=x.json".parse().unwrap();
        let e = load_maps(&["2018", "2019", "2020"], &[m]).unwrap_err();
        assert!(matches!(e, CliError::Usage(_)));
        assert_eq!(load_maps(&["2018", "2019"], &[]).unwrap().len(), 1);
    }
}
