#![allow(dead_code)]

use genepy_core::{Matrix, ScorePanel};
use genepy_testkit::Dense;
use proptest::prelude::*;

pub fn ids(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i:02}")).collect()
}

pub fn panel(rows: &Dense) -> ScorePanel {
    let ne = rows.len();
    let nc = rows[0].len();
    let cells = rows.iter().flatten().map(|&x| Some(x)).collect();
    ScorePanel::new("t", ids("e", ne), ids("g", nc), cells).expect("valid test panel")
}

pub fn dense(m: &Matrix) -> Dense {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Strictly positive panels in `[0.5, 100]`.
pub fn positive_panel(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Dense> {
    (2..=max_rows, 2..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(0.5f64..=100.0, c), r)
    })
}

/// Panels with some exact zeros but no zero row or column.
pub fn sparse_panel(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Dense> {
    positive_panel(max_rows, max_cols)
        .prop_flat_map(|m| {
            let (r, c) = (m.len(), m[0].len());
            (Just(m), prop::collection::vec(prop::bool::weighted(0.3), r * c))
        })
        .prop_map(|(mut m, zero)| {
            let (r, c) = (m.len(), m[0].len());
            for (i, row) in m.iter_mut().enumerate() {
                for (j, x) in row.iter_mut().enumerate() {
                    // the diagonal band stays positive so no line empties out
                    if zero[i * c + j] && j != i % c && i != j % r {
                        *x = 0.0;
                    }
                }
            }
            m
        })
}

/// Integer-valued scores in `[1, 100]`.
pub fn integer_panel(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Dense> {
    (2..=max_rows, 2..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec((1u32..=100).prop_map(f64::from), c), r)
    })
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
