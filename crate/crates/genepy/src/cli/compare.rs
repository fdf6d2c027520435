use std::path::PathBuf;

use genepy_core::analytics::{rank_correlation, RankBasis, RankTable};
use genepy_core::panel::{align_panels, Lineage};
use genepy_core::SolverOptions;

use super::pipeline::{load_maps, load_panels, run_year};
use super::{check_solver, write, CliError, IndicatorInput, MapInput, PanelInput};
use crate::report::{emit_table, CorrelationRow, Format, RankComparison};

#[derive(Clone, Debug, PartialEq)]
pub struct CompareConfig {
    pub panels: Vec<PanelInput>,
    pub indicators: Option<IndicatorInput>,
    pub maps: Vec<MapInput>,
    pub basis_a: RankBasis,
    pub basis_b: RankBasis,
    pub tol: f64,
    pub max_steps: usize,
    pub allow_nonconverged: bool,
    pub out: Option<PathBuf>,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareReport {
    pub year_a: String,
    pub year_b: String,
    pub comparison: RankComparison,
    pub rho: f64,
    /// The side-by-side table as written.
    pub table_text: String,
}

impl CompareReport {
    pub fn summary_line(&self) -> String {
        format!(
            "spearman_rho({}@{}, {}@{}) = {:.6} over {} entities",
            self.comparison.a.basis,
            self.year_a,
            self.comparison.b.basis,
            self.year_b,
            self.rho,
            self.comparison.a.len()
        )
    }
}

fn needs(basis: RankBasis) -> (bool, bool) {
    match basis {
        RankBasis::Complexity => (true, false),
        RankBasis::Fitness => (false, true),
        RankBasis::Degree | RankBasis::CompositeMean => (false, false),
    }
}

/// Relabel `a` with the later ids of one-to-one links and drop the rest.
fn carry_forward(a: &RankTable, links: &[(String, String)]) -> RankTable {
    let mut t = a.clone();
    t.entries.retain(|e| links.iter().any(|(from, _)| *from == e.entity));
    for e in &mut t.entries {
        if let Some((_, to)) = links.iter().find(|(from, _)| *from == e.entity) {
            e.entity = to.clone();
        }
    }
    let keep: Vec<String> = t.entries.iter().map(|e| e.entity.clone()).collect();
    let keep: Vec<&str> = keep.iter().map(String::as_str).collect();
    t.restricted_to(&keep)
}

/// Spearman correlation between basis A and basis B.
///
/// With one input year both rankings come from that year. With two, basis
/// A is taken from the first and basis B from the second; differing rosters
/// then need an `--entity-map`, and only continuing or renamed entities are
/// compared.
pub fn cmd_compare(cfg: &CompareConfig) -> Result<CompareReport, CliError> {
    check_solver(cfg.tol, cfg.max_steps)?;
    let panels = load_panels(&cfg.panels, cfg.indicators.as_ref())?;
    if panels.is_empty() || panels.len() > 2 {
        return Err(CliError::Usage(format!(
            "compare takes one or two input years, got {}",
            panels.len()
        )));
    }
    let years: Vec<String> = panels.iter().map(|p| p.year().to_owned()).collect();
    let year_refs: Vec<&str> = years.iter().map(String::as_str).collect();
    let maps = load_maps(&year_refs, &cfg.maps)?;

    let opts = SolverOptions {
        tol: cfg.tol,
        max_steps: cfg.max_steps,
        require_convergence: !cfg.allow_nonconverged,
    };
    let (sa, ia) = needs(cfg.basis_a);
    let (sb, ib) = needs(cfg.basis_b);
    let mut panels = panels.into_iter();
    let first = panels.next().expect("one panel at least");
    let (table_a, table_b, year_b) = match panels.next() {
        None => {
            let run = run_year(first, sa || sb, ia || ib || !(sa || sb), &opts)?;
            let a = run.rank(cfg.basis_a).expect("basis computed").clone();
            let b = run.rank(cfg.basis_b).expect("basis computed").clone();
            (a, b, years[0].clone())
        }
        Some(second) => {
            let map = &maps[0];
            if map.is_empty() && !same_roster(first.entities(), second.entities()) {
                return Err(CliError::Usage(format!(
                    "entity rosters of {} and {} differ; pass --entity-map {}->{}=<path>",
                    years[0], years[1], years[0], years[1]
                )));
            }
            let alignment = align_panels(&first, &second, map).map_err(|source| CliError::Align {
                from: years[0].clone(),
                to: years[1].clone(),
                source,
            })?;
            let links: Vec<(String, String)> = alignment
                .links
                .iter()
                .filter(|l| matches!(l.lineage, Lineage::Continuing | Lineage::Renamed { .. }))
                .filter_map(|l| l.predecessor.clone().map(|p| (p, l.entity.clone())))
                .collect();
            let run_a = run_year(first, sa, ia || !sa, &opts)?;
            let run_b = run_year(second, sb, ib || !sb, &opts)?;
            let a = carry_forward(run_a.rank(cfg.basis_a).expect("basis computed"), &links);
            let keep: Vec<&str> = links.iter().map(|(_, to)| to.as_str()).collect();
            let b = run_b.rank(cfg.basis_b).expect("basis computed").restricted_to(&keep);
            (a, b, years[1].clone())
        }
    };

    let rho = rank_correlation(&table_a, &table_b).map_err(|source| CliError::Analytics {
        year: year_b.clone(),
        source,
    })?;
    let comparison = RankComparison { a: table_a, b: table_b };
    let table_text = emit_table(&comparison, cfg.format);
    if let Some(dir) = &cfg.out {
        let ext = cfg.format.extension();
        write(&dir.join(format!("comparison.{ext}")), &table_text)?;
        let row = [CorrelationRow {
            year: if years[0] == year_b { year_b.clone() } else { format!("{}->{}", years[0], year_b) },
            basis_a: cfg.basis_a.as_str().to_owned(),
            basis_b: cfg.basis_b.as_str().to_owned(),
            rho: Some(rho),
        }];
        write(&dir.join(format!("correlation.{ext}")), &emit_table(row.as_slice(), cfg.format))?;
    }
    Ok(CompareReport {
        year_a: years[0].clone(),
        year_b,
        comparison,
        rho,
        table_text,
    })
}

fn same_roster(a: &[String], b: &[String]) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.contains(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use genepy_core::analytics::rank_entities;

    #[test]
    fn carry_forward_renames_and_reranks() {
        let t = rank_entities("2019", &["a", "b", "c"], &[3.0, 2.0, 1.0], RankBasis::Degree).unwrap();
        let links = vec![("a".to_owned(), "A".to_owned()), ("c".to_owned(), "c".to_owned())];
        let f = carry_forward(&t, &links);
        let got: Vec<(&str, usize)> = f.entries.iter().map(|e| (e.entity.as_str(), e.rank)).collect();
        assert_eq!(got, [("A", 1), ("c", 2)]);
    }
}
