use std::path::{Path, PathBuf};

use genepy_core::analytics::{
    rank_correlation, rank_evolution, tertile_groups, weights_evolution, AnalyticsError, RankBasis, RankSeries,
};
use genepy_core::{GoalWeights, WeightsEvolution};

use super::pipeline::{load_maps, load_panels, run_year, YearRun};
use super::{write, year_dir, CliError, RunConfig};
use crate::report::{
    emit_bipartite, emit_grouped_bars, emit_heatmap, emit_rank_bump, emit_table, emit_weight_bars,
    emit_weighted_lines, CategoryScoresTable, ChartKind, ChartSpec, CorrelationRow, EntityScoresTable, Format,
    SolverRow, Tabular,
};

/// Entities shown in the default bipartite chart.
const BIPARTITE_TOP: usize = 8;

/// What a `compute` run produced.
#[derive(Clone, Debug, PartialEq)]
pub struct ComputeSummary {
    pub out: PathBuf,
    /// Written files relative to `out`, in write order.
    pub files: Vec<PathBuf>,
    pub solver: Vec<SolverRow>,
    pub correlations: Vec<CorrelationRow>,
}

impl ComputeSummary {
    pub fn report_lines(&self) -> Vec<String> {
        let mut lines = Vec::new();
        for s in &self.solver {
            let status = if s.converged { "converged" } else { "NOT converged" };
            let mut line = format!(
                "{} {}: {status} after {} steps, residual {:e}",
                s.year, s.method, s.steps, s.residual
            );
            if let (Some(u), Some(v)) = (s.lambda_u, s.lambda_v) {
                line.push_str(&format!(", lambda_U {u:.6}, lambda_V {v:.6}"));
            }
            lines.push(line);
        }
        for c in &self.correlations {
            let rho = c.rho.map_or_else(|| "undefined".to_owned(), |r| format!("{r:.6}"));
            lines.push(format!("{} spearman_rho({}, {}) = {rho}", c.year, c.basis_a, c.basis_b));
        }
        lines.push(format!("wrote {} files to {}", self.files.len(), self.out.display()));
        lines
    }
}

struct Writer<'a> {
    root: &'a Path,
    format: Format,
    files: Vec<PathBuf>,
}

impl Writer<'_> {
    fn text(&mut self, rel: PathBuf, contents: &str) -> Result<(), CliError> {
        write(&self.root.join(&rel), contents)?;
        self.files.push(rel);
        Ok(())
    }

    fn table<T: Tabular + ?Sized>(&mut self, dir: Option<&str>, stem: &str, data: &T) -> Result<(), CliError> {
        let name = format!("{stem}.{}", self.format.extension());
        let rel = dir.map_or_else(|| PathBuf::from(&name), |d| Path::new(d).join(&name));
        self.text(rel, &emit_table(data, self.format))
    }

    fn chart(&mut self, dir: Option<&str>, kind: ChartKind, svg: String) -> Result<(), CliError> {
        let name = format!("{}.svg", kind.as_str());
        let rel = dir.map_or_else(|| PathBuf::from(&name), |d| Path::new(d).join(&name));
        self.text(rel, &svg)
    }
}

fn report_err(what: String) -> impl FnOnce(crate::report::ReportError) -> CliError {
    move |source| CliError::Report { what, source }
}

fn correlations(run: &YearRun) -> Result<Vec<CorrelationRow>, CliError> {
    let pairs = [
        (RankBasis::Complexity, RankBasis::Fitness),
        (RankBasis::Degree, RankBasis::Complexity),
        (RankBasis::Degree, RankBasis::Fitness),
    ];
    let mut rows = Vec::new();
    for (a, b) in pairs {
        let (Some(ta), Some(tb)) = (run.rank(a), run.rank(b)) else {
            continue;
        };
        let rho = match rank_correlation(ta, tb) {
            Ok(r) => Some(r),
            Err(AnalyticsError::ConstantRanking) => None,
            Err(source) => {
                return Err(CliError::Analytics {
                    year: run.year().to_owned(),
                    source,
                })
            }
        };
        rows.push(CorrelationRow {
            year: run.year().to_owned(),
            basis_a: a.as_str().to_owned(),
            basis_b: b.as_str().to_owned(),
            rho,
        });
    }
    Ok(rows)
}

fn year_charts(run: &YearRun, cfg: &RunConfig, w: &mut Writer, dir: &str) -> Result<(), CliError> {
    let year = run.year();
    for &kind in cfg.charts.iter().filter(|k| k.is_per_year()) {
        let what = format!("{kind} chart for {year}");
        let svg = match kind {
            ChartKind::Heatmap => {
                let spec = ChartSpec::new(kind, format!("Scores I_sg, {year}"));
                emit_heatmap(&run.panel, &spec).map_err(report_err(what))?
            }
            ChartKind::Bipartite => {
                let subset: Vec<&str> = if cfg.bipartite.is_empty() {
                    run.primary().entries.iter().take(BIPARTITE_TOP).map(|e| e.entity.as_str()).collect()
                } else {
                    cfg.bipartite.iter().map(String::as_str).collect()
                };
                let spec = ChartSpec::new(kind, format!("Entity-category network, {year}"));
                emit_bipartite(&run.panel, &subset, &spec).map_err(report_err(what))?
            }
            ChartKind::WeightBars => {
                let spec = ChartSpec::new(kind, format!("Category weights W_g, {year}"));
                emit_weight_bars(&run.weights, &spec).map_err(report_err(what))?
            }
            ChartKind::WeightedLines => {
                let profile = tertile_groups(run.primary(), &run.panel, &run.weights).map_err(|source| {
                    CliError::Analytics {
                        year: year.to_owned(),
                        source,
                    }
                })?;
                let spec = ChartSpec::new(kind, format!("Weighted performance I_sg W_g, {year}"));
                emit_weighted_lines(&profile, &spec).map_err(report_err(what))?
            }
            ChartKind::RankBump | ChartKind::GroupedBars => unreachable!("filtered to per-year kinds"),
        };
        w.chart(Some(dir), kind, svg)?;
    }
    Ok(())
}

fn year_tables(run: &YearRun, w: &mut Writer, dir: &str) -> Result<(), CliError> {
    let spectral = run.spectral.as_ref().map(|s| &s.scores);
    let iterative = run.iterative.as_ref().map(|(s, _)| s);
    let entities = EntityScoresTable {
        entities: run.panel.entities().to_vec(),
        k_s: run.degree.k_s.clone(),
        applicable_count: run.degree.applicable_count.clone(),
        composite_mean: run.degree.composite_mean.clone(),
        spectral: spectral.map(|s| s.entity_scores.clone()),
        iterative: iterative.map(|s| s.entity_scores.clone()),
    };
    let categories = CategoryScoresTable {
        categories: run.panel.categories().to_vec(),
        k_g_prime: run.ubiquity.k_g_prime.clone(),
        spectral: spectral.map(|s| s.category_scores.clone()),
        iterative: iterative.map(|s| s.category_scores.clone()),
        weights: run.weights.weights.clone(),
    };
    w.table(Some(dir), "entity_scores", &entities)?;
    w.table(Some(dir), "category_scores", &categories)?;
    for t in &run.ranks {
        w.table(Some(dir), &format!("ranks_{}", t.basis.as_str()), t)?;
    }
    Ok(())
}

/// Run the full pipeline and write every table and requested chart under
/// `cfg.out`. Identical inputs give byte-identical files.
pub fn cmd_compute(cfg: &RunConfig) -> Result<ComputeSummary, CliError> {
    cfg.check()?;
    let panels = load_panels(&cfg.panels, cfg.indicators.as_ref())?;
    let years: Vec<String> = panels.iter().map(|p| p.year().to_owned()).collect();
    let year_refs: Vec<&str> = years.iter().map(String::as_str).collect();
    let maps = load_maps(&year_refs, &cfg.maps)?;
    let dirs: Vec<String> = years.iter().map(|y| year_dir(y)).collect();
    for (k, d) in dirs.iter().enumerate() {
        if dirs[..k].contains(d) {
            return Err(CliError::Usage(format!(
                "years `{}` and `{}` map to the same output directory",
                years[dirs.iter().position(|x| x == d).unwrap_or(0)],
                years[k]
            )));
        }
    }

    let opts = cfg.solver();
    let runs: Vec<YearRun> = panels
        .into_iter()
        .map(|p| run_year(p, cfg.method.spectral(), cfg.method.iterative(), &opts))
        .collect::<Result<_, _>>()?;

    let mut w = Writer {
        root: &cfg.out,
        format: cfg.format,
        files: Vec::new(),
    };
    let mut solver = Vec::new();
    let mut corr = Vec::new();
    for (run, dir) in runs.iter().zip(&dirs) {
        year_tables(run, &mut w, dir)?;
        year_charts(run, cfg, &mut w, dir)?;
        solver.extend(run.solver_rows());
        corr.extend(correlations(run)?);
    }
    w.table(None, "solver", solver.as_slice())?;
    w.table(None, "correlations", corr.as_slice())?;

    // trajectories follow the complexity ranking
    let tables: Vec<_> = runs.iter().map(|r| r.primary().clone()).collect();
    let series: RankSeries = rank_evolution(&tables, &maps).map_err(|source| CliError::Analytics {
        year: years.join(","),
        source,
    })?;
    let weights: Vec<GoalWeights> = runs.iter().map(|r| r.weights.clone()).collect();
    let evolution: WeightsEvolution = weights_evolution(&weights);
    w.table(None, "rank_evolution", &series)?;
    w.table(None, "weights_evolution", &evolution)?;

    let basis = runs[0].primary_basis();
    for &kind in cfg.charts.iter().filter(|k| !k.is_per_year()) {
        let what = format!("{kind} chart");
        let svg = match kind {
            ChartKind::RankBump => {
                let spec = ChartSpec::new(kind, format!("Rank evolution by {}", basis.as_str()));
                emit_rank_bump(&series, &spec).map_err(report_err(what))?
            }
            ChartKind::GroupedBars => {
                let spec = ChartSpec::new(kind, "Category weights W_g by year");
                emit_grouped_bars(&evolution, &spec).map_err(report_err(what))?
            }
            _ => unreachable!("filtered to run-level kinds"),
        };
        w.chart(None, kind, svg)?;
    }

    Ok(ComputeSummary {
        out: cfg.out.clone(),
        files: w.files,
        solver,
        correlations: corr,
    })
}
