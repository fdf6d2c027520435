use genepy_core::panel::Finding;
use genepy_core::{GoalWeights, RankSeries, RankTable, WeightsEvolution};

use crate::io;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    /// Written with 6 decimals.
    Num(f64),
    Bool(bool),
    Missing,
}

impl Cell {
    fn num(x: Option<f64>) -> Cell {
        x.map_or(Cell::Missing, Cell::Num)
    }

    fn int(x: Option<usize>) -> Cell {
        x.map_or(Cell::Missing, |v| Cell::Int(v as i64))
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

fn fixed6(x: f64) -> Option<String> {
    if !x.is_finite() {
        return None;
    }
    let s = format!("{x:.6}");
    Some(if s == "-0.000000" { "0.000000".into() } else { s })
}

/// Anything with a fixed column order and rectangular rows.
pub trait Tabular {
    fn columns(&self) -> Vec<String>;
    fn rows(&self) -> Vec<Vec<Cell>>;
}

/// Serialize a table. CSV has a header row; JSON is an array of objects
/// whose keys follow the column order. Numbers get 6 decimals, missing
/// values are empty in CSV and `null` in JSON.
pub fn emit_table<T: Tabular + ?Sized>(data: &T, format: Format) -> String {
    let columns = data.columns();
    let rows = data.rows();
    match format {
        Format::Csv => {
            let mut w = io::writer();
            w.write_record(&columns).expect("in-memory write");
            for row in &rows {
                debug_assert_eq!(row.len(), columns.len());
                let fields = row.iter().map(|c| match c {
                    Cell::Text(s) => s.clone(),
                    Cell::Int(v) => v.to_string(),
                    Cell::Num(x) => fixed6(*x).unwrap_or_default(),
                    Cell::Bool(b) => b.to_string(),
                    Cell::Missing => String::new(),
                });
                w.write_record(fields).expect("in-memory write");
            }
            io::finish(w)
        }
        Format::Json => {
            if rows.is_empty() {
                return "[]\n".into();
            }
            let keys: Vec<String> = columns.iter().map(|c| json_string(c)).collect();
            let mut out = String::from("[\n");
            for (k, row) in rows.iter().enumerate() {
                out.push_str("  {");
                for (j, (key, cell)) in keys.iter().zip(row).enumerate() {
                    if j > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(key);
                    out.push_str(": ");
                    out.push_str(&match cell {
                        Cell::Text(s) => json_string(s),
                        Cell::Int(v) => v.to_string(),
                        Cell::Num(x) => fixed6(*x).unwrap_or_else(|| "null".into()),
                        Cell::Bool(b) => b.to_string(),
                        Cell::Missing => "null".into(),
                    });
                }
                out.push('}');
                if k + 1 < rows.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str("]\n");
            out
        }
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

impl Tabular for RankTable {
    fn columns(&self) -> Vec<String> {
        ["year", "basis", "rank", "entity", "score", "tied"].map(String::from).to_vec()
    }

    fn rows(&self) -> Vec<Vec<Cell>> {
        self.entries
            .iter()
            .map(|e| {
                vec![
                    self.year.as_str().into(),
                    self.basis.as_str().into(),
                    e.rank.into(),
                    e.entity.as_str().into(),
                    e.score.into(),
                    Cell::Bool(e.tied),
                ]
            })
            .collect()
    }
}

impl Tabular for GoalWeights {
    fn columns(&self) -> Vec<String> {
        ["year", "category", "weight"].map(String::from).to_vec()
    }

    fn rows(&self) -> Vec<Vec<Cell>> {
        self.categories
            .iter()
            .zip(&self.weights)
            .map(|(c, &w)| vec![self.year.as_str().into(), c.as_str().into(), w.into()])
            .collect()
    }
}

/// `row` and `column` are 1-based positions in the panel's entity and
/// category lists.
impl Tabular for [Finding] {
    fn columns(&self) -> Vec<String> {
        ["severity", "code", "row", "column", "missing_fraction", "message"]
            .map(String::from)
            .to_vec()
    }

    fn rows(&self) -> Vec<Vec<Cell>> {
        self.iter()
            .map(|f| {
                let (r, c) = f.location();
                vec![
                    f.severity.to_string().as_str().into(),
                    f.code().into(),
                    Cell::int(r.map(|r| r + 1)),
                    Cell::int(c.map(|c| c + 1)),
                    Cell::num(f.missing_fraction()),
                    f.to_string().as_str().into(),
                ]
            })
            .collect()
    }
}

impl Tabular for WeightsEvolution {
    fn columns(&self) -> Vec<String> {
        std::iter::once("category".to_owned()).chain(self.years.iter().cloned()).collect()
    }

    fn rows(&self) -> Vec<Vec<Cell>> {
        self.categories
            .iter()
            .zip(&self.values)
            .map(|(c, vals)| {
                std::iter::once(c.as_str().into())
                    .chain(vals.iter().map(|&v| Cell::num(v)))
                    .collect()
            })
            .collect()
    }
}

impl Tabular for RankSeries {
    fn columns(&self) -> Vec<String> {
        ["entity", "final_rank", "split_derived", "inherited_years"]
            .map(String::from)
            .into_iter()
            .chain(self.years.iter().cloned())
            .collect()
    }

    fn rows(&self) -> Vec<Vec<Cell>> {
        self.trajectories
            .iter()
            .map(|t| {
                let inherited: Vec<&str> = t
                    .points
                    .iter()
                    .filter(|p| p.inherited)
                    .map(|p| p.year.as_str())
                    .collect();
                let mut row = vec![
                    t.entity.as_str().into(),
                    Cell::int(t.final_rank),
                    Cell::Bool(t.is_split_derived()),
                    inherited.join(";").as_str().into(),
                ];
                row.extend(self.years.iter().map(|y| Cell::int(t.rank_in(y))));
                row
            })
            .collect()
    }
}

/// Per-entity scores for one year. Method columns appear only when that
/// method was run.
#[derive(Clone, Debug, PartialEq)]
pub struct EntityScoresTable {
    pub entities: Vec<String>,
    pub k_s: Vec<f64>,
    pub applicable_count: Vec<usize>,
    pub composite_mean: Vec<f64>,
    pub spectral: Option<Vec<f64>>,
    pub iterative: Option<Vec<f64>>,
}

impl Tabular for EntityScoresTable {
    fn columns(&self) -> Vec<String> {
        let mut c: Vec<String> = ["entity", "k_s", "applicable_count", "composite_mean"]
            .map(String::from)
            .to_vec();
        if self.spectral.is_some() {
            c.push("D_s".into());
        }
        if self.iterative.is_some() {
            c.push("D_s_iterative".into());
        }
        c
    }

    fn rows(&self) -> Vec<Vec<Cell>> {
        (0..self.entities.len())
            .map(|i| {
                let mut row = vec![
                    self.entities[i].as_str().into(),
                    self.k_s[i].into(),
                    self.applicable_count[i].into(),
                    self.composite_mean[i].into(),
                ];
                row.extend(self.spectral.as_ref().map(|d| Cell::Num(d[i])));
                row.extend(self.iterative.as_ref().map(|d| Cell::Num(d[i])));
                row
            })
            .collect()
    }
}

/// Per-category scores and weights for one year.
#[derive(Clone, Debug, PartialEq)]
pub struct CategoryScoresTable {
    pub categories: Vec<String>,
    pub k_g_prime: Vec<f64>,
    pub spectral: Option<Vec<f64>>,
    pub iterative: Option<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl Tabular for CategoryScoresTable {
    fn columns(&self) -> Vec<String> {
        let mut c = vec!["category".to_owned(), "k_g_prime".to_owned()];
        if self.spectral.is_some() {
            c.push("C_g".into());
        }
        if self.iterative.is_some() {
            c.push("C_g_iterative".into());
        }
        c.push("W_g".into());
        c
    }

    fn rows(&self) -> Vec<Vec<Cell>> {
        (0..self.categories.len())
            .map(|j| {
                let mut row = vec![self.categories[j].as_str().into(), self.k_g_prime[j].into()];
                row.extend(self.spectral.as_ref().map(|c| Cell::Num(c[j])));
                row.extend(self.iterative.as_ref().map(|c| Cell::Num(c[j])));
                row.push(self.weights[j].into());
                row
            })
            .collect()
    }
}

/// Two rank tables over the same entities, side by side in the order of
/// the first.
#[derive(Clone, Debug, PartialEq)]
pub struct RankComparison {
    pub a: RankTable,
    pub b: RankTable,
}

impl Tabular for RankComparison {
    /// Column suffixes are the bases, extended with the years or `a`/`b`
    /// when needed to keep them distinct.
    fn columns(&self) -> Vec<String> {
        let (mut a, mut b) = (self.a.basis.as_str().to_owned(), self.b.basis.as_str().to_owned());
        if a == b {
            if self.a.year != self.b.year {
                a = format!("{a}_{}", self.a.year);
                b = format!("{b}_{}", self.b.year);
            } else {
                a.push_str("_a");
                b.push_str("_b");
            }
        }
        vec![
            "entity".into(),
            format!("rank_{a}"),
            format!("score_{a}"),
            format!("rank_{b}"),
            format!("score_{b}"),
        ]
    }

    fn rows(&self) -> Vec<Vec<Cell>> {
        self.a
            .entries
            .iter()
            .map(|e| {
                let other = self.b.entries.iter().find(|o| o.entity == e.entity);
                vec![
                    e.entity.as_str().into(),
                    e.rank.into(),
                    e.score.into(),
                    Cell::int(other.map(|o| o.rank)),
                    Cell::num(other.map(|o| o.score)),
                ]
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationRow {
    pub year: String,
    pub basis_a: String,
    pub basis_b: String,
    /// `None` when a ranking is constant and rho is undefined.
    pub rho: Option<f64>,
}

impl Tabular for [CorrelationRow] {
    fn columns(&self) -> Vec<String> {
        ["year", "basis_a", "basis_b", "spearman_rho"].map(String::from).to_vec()
    }

    fn rows(&self) -> Vec<Vec<Cell>> {
        self.iter()
            .map(|r| {
                vec![
                    r.year.as_str().into(),
                    r.basis_a.as_str().into(),
                    r.basis_b.as_str().into(),
                    Cell::num(r.rho),
                ]
            })
            .collect()
    }
}

/// Convergence record of one solver run.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverRow {
    pub year: String,
    pub method: String,
    pub converged: bool,
    pub steps: usize,
    pub residual: f64,
    pub lambda_u: Option<f64>,
    pub lambda_v: Option<f64>,
}

impl Tabular for [SolverRow] {
    fn columns(&self) -> Vec<String> {
        ["year", "method", "converged", "steps", "residual", "lambda_U", "lambda_V"]
            .map(String::from)
            .to_vec()
    }

    fn rows(&self) -> Vec<Vec<Cell>> {
        self.iter()
            .map(|r| {
                vec![
                    r.year.as_str().into(),
                    r.method.as_str().into(),
                    Cell::Bool(r.converged),
                    r.steps.into(),
                    // residuals live far below 6 decimals
                    format!("{:e}", r.residual).as_str().into(),
                    Cell::num(r.lambda_u),
                    Cell::num(r.lambda_v),
                ]
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use genepy_core::analytics::{rank_entities, RankBasis};

    fn weights() -> GoalWeights {
        GoalWeights {
            year: "2024".into(),
            categories: vec!["g1".into(), "g2".into()],
            weights: vec![2.0 / 3.0, 2.0],
        }
    }

    #[test]
    fn weights_round_to_six_places() {
        assert_eq!(
            emit_table(&weights(), Format::Csv),
            "year,category,weight\n2024,g1,0.666667\n2024,g2,2.000000\n"
        );
        assert_eq!(
            emit_table(&weights(), Format::Json),
            "[\n  {\"year\": \"2024\", \"category\": \"g1\", \"weight\": 0.666667},\n  \
             {\"year\": \"2024\", \"category\": \"g2\", \"weight\": 2.000000}\n]\n"
        );
    }

    #[test]
    fn rank_table_has_header_plus_rows() {
        let t = rank_entities("t", &["a", "b", "c"], &[1.0, 3.0, 2.0], RankBasis::Complexity).unwrap();
        let csv = emit_table(&t, Format::Csv);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "year,basis,rank,entity,score,tied");
        assert_eq!(lines[1], "t,D_s,1,b,3.000000,false");
        let json: serde_json::Value = serde_json::from_str(&emit_table(&t, Format::Json)).unwrap();
        assert_eq!(json.as_array().unwrap().len(), 3);
        assert_eq!(json[2]["entity"], "a");
    }

    #[test]
    fn empty_findings_are_header_only() {
        let f: Vec<Finding> = Vec::new();
        assert_eq!(emit_table(f.as_slice(), Format::Csv), "severity,code,row,column,missing_fraction,message\n");
        assert_eq!(emit_table(f.as_slice(), Format::Json), "[]\n");
    }

    #[test]
    fn gaps_are_empty_or_null() {
        let evo = WeightsEvolution {
            years: vec!["2018".into(), "2019".into()],
            categories: vec!["g12".into()],
            values: vec![vec![None, Some(1.25)]],
        };
        assert_eq!(emit_table(&evo, Format::Csv), "category,2018,2019\ng12,,1.250000\n");
        assert!(emit_table(&evo, Format::Json).contains("\"2018\": null"));
    }

    #[test]
    fn comparison_columns_stay_distinct() {
        let t = |year: &str, basis| rank_entities(year, &["a", "b"], &[2.0, 1.0], basis).unwrap();
        let cols = |a, b| RankComparison { a, b }.columns().join(",");
        assert_eq!(
            cols(t("2024", RankBasis::Degree), t("2024", RankBasis::Complexity)),
            "entity,rank_k_s,score_k_s,rank_D_s,score_D_s"
        );
        assert_eq!(
            cols(t("2019", RankBasis::Complexity), t("2020", RankBasis::Complexity)),
            "entity,rank_D_s_2019,score_D_s_2019,rank_D_s_2020,score_D_s_2020"
        );
        assert_eq!(
            cols(t("2024", RankBasis::Degree), t("2024", RankBasis::Degree)),
            "entity,rank_k_s_a,score_k_s_a,rank_k_s_b,score_k_s_b"
        );
    }

    #[test]
    fn negative_zero_prints_plain() {
        assert_eq!(fixed6(-1e-9).unwrap(), "0.000000");
        assert_eq!(fixed6(f64::NAN), None);
    }
}
