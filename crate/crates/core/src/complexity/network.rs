use alloc::vec::Vec;

use super::ComplexityError;
use crate::matrix::Matrix;
use crate::panel::ScorePanel;

/// Weighted degree of each entity.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeIndex {
    /// `k_s = Σ_g I_sg` over present cells.
    pub k_s: Vec<f64>,
    /// Present cells per entity.
    pub applicable_count: Vec<usize>,
    /// `k_s / applicable_count`, the equal-weight composite index.
    pub composite_mean: Vec<f64>,
}

/// `k'_g = Σ_s I_sg / k_s`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjustedUbiquity {
    pub k_g_prime: Vec<f64>,
}

/// `N_sg = I_sg / (k_s k'_g)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProximityMatrix {
    pub values: Matrix,
}

/// `U = N Nᵀ` over entities, `V = Nᵀ N` over categories.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityPair {
    pub u: Matrix,
    pub v: Matrix,
}

pub fn degree_index(panel: &ScorePanel) -> Result<DegreeIndex, ComplexityError> {
    let scores = panel.scores();
    let n = panel.n_entities();
    let mut k_s = Vec::with_capacity(n);
    let mut applicable_count = Vec::with_capacity(n);
    let mut composite_mean = Vec::with_capacity(n);
    for i in 0..n {
        let total: f64 = scores.row(i).iter().sum();
        let count = (0..panel.n_categories()).filter(|&j| !panel.is_missing(i, j)).count();
        if total <= 0.0 || count == 0 {
            return Err(ComplexityError::DegenerateEntity {
                entity: panel.entities()[i].clone(),
            });
        }
        k_s.push(total);
        applicable_count.push(count);
        composite_mean.push(total / count as f64);
    }
    Ok(DegreeIndex {
        k_s,
        applicable_count,
        composite_mean,
    })
}

pub fn adjusted_ubiquity(
    panel: &ScorePanel,
    deg: &DegreeIndex,
) -> Result<AdjustedUbiquity, ComplexityError> {
    check_len("entity", panel.n_entities(), deg.k_s.len())?;
    let scores = panel.scores();
    let k_g_prime = (0..panel.n_categories())
        .map(|j| {
            let kp: f64 = scores.column(j).zip(&deg.k_s).map(|(x, k)| x / k).sum();
            if kp > 0.0 {
                Ok(kp)
            } else {
                Err(ComplexityError::DegenerateCategory {
                    category: panel.categories()[j].clone(),
                })
            }
        })
        .collect::<Result<_, _>>()?;
    Ok(AdjustedUbiquity { k_g_prime })
}

pub fn proximity(
    panel: &ScorePanel,
    deg: &DegreeIndex,
    ubiq: &AdjustedUbiquity,
) -> Result<ProximityMatrix, ComplexityError> {
    check_len("entity", panel.n_entities(), deg.k_s.len())?;
    check_len("category", panel.n_categories(), ubiq.k_g_prime.len())?;
    let scores = panel.scores();
    let mut values = Matrix::zeros(panel.n_entities(), panel.n_categories());
    // (I / k_s) / k'_g rather than I / (k_s k'_g): both divisions then round
    // a scale-free quotient, so an exact rescale of I reproduces N bit for bit
    for (i, k) in deg.k_s.iter().enumerate() {
        for (j, kp) in ubiq.k_g_prime.iter().enumerate() {
            values[(i, j)] = scores[(i, j)] / k / kp;
        }
    }
    Ok(ProximityMatrix { values })
}

pub fn similarity(n: &ProximityMatrix) -> SimilarityPair {
    let mut u = n.values.gram_rows();
    let mut v = n.values.gram_cols();
    u.symmetrize();
    v.symmetrize();
    SimilarityPair { u, v }
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<(), ComplexityError> {
    if expected == found {
        Ok(())
    } else {
        Err(ComplexityError::LengthMismatch {
            what,
            expected,
            found,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked() -> ScorePanel {
        ScorePanel::from_rows("t", &["a", "b", "c"], &["x", "y"], &[[2.0, 0.0], [1.0, 1.0], [0.0, 2.0]])
            .unwrap()
    }

    fn small() -> ScorePanel {
        ScorePanel::from_rows("t", &["a", "b"], &["x", "y"], &[[1.0, 1.0], [1.0, 0.0]]).unwrap()
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-15)
    }

    #[test]
    fn degree_of_worked_panel() {
        let d = degree_index(&worked()).unwrap();
        assert_eq!(d.k_s, [2.0, 2.0, 2.0]);
        assert_eq!(d.applicable_count, [2, 2, 2]);
        assert_eq!(d.composite_mean, [1.0, 1.0, 1.0]);
    }

    #[test]
    fn uniform_composite_mean() {
        let rows = [[100.0; 15]; 4];
        let cats: alloc::vec::Vec<alloc::string::String> =
            (0..15).map(|j| alloc::format!("g{j}")).collect();
        let cat_refs: alloc::vec::Vec<&str> = cats.iter().map(|s| s.as_str()).collect();
        let p = ScorePanel::from_rows("t", &["a", "b", "c", "d"], &cat_refs, &rows).unwrap();
        let d = degree_index(&p).unwrap();
        assert!(d.composite_mean.iter().all(|&m| m == 100.0));
        // uniform matrix: k'_g = ν^s / ν^g
        let u = adjusted_ubiquity(&p, &d).unwrap();
        assert!(u.k_g_prime.iter().all(|&k| (k - 4.0 / 15.0).abs() < 1e-15));
    }

    #[test]
    fn zero_row_is_degenerate() {
        let p = ScorePanel::from_rows("t", &["a", "b"], &["x", "y"], &[[0.0, 0.0], [1.0, 2.0]]).unwrap();
        assert_eq!(
            degree_index(&p).unwrap_err(),
            ComplexityError::DegenerateEntity { entity: "a".into() }
        );
    }

    #[test]
    fn zero_column_is_degenerate() {
        let p = ScorePanel::from_rows("t", &["a", "b"], &["x", "y"], &[[0.0, 3.0], [0.0, 2.0]]).unwrap();
        let d = degree_index(&p).unwrap();
        assert_eq!(
            adjusted_ubiquity(&p, &d).unwrap_err(),
            ComplexityError::DegenerateCategory { category: "x".into() }
        );
    }

    #[test]
    fn ubiquity_hand_values() {
        let p = worked();
        let d = degree_index(&p).unwrap();
        assert!(close(&adjusted_ubiquity(&p, &d).unwrap().k_g_prime, &[1.5, 1.5]));
        let p = small();
        let d = degree_index(&p).unwrap();
        assert!(close(&adjusted_ubiquity(&p, &d).unwrap().k_g_prime, &[1.5, 0.5]));
    }

    #[test]
    fn proximity_hand_values() {
        for (p, expect) in [
            (worked(), [2.0 / 3.0, 0.0, 1.0 / 3.0, 1.0 / 3.0, 0.0, 2.0 / 3.0].as_slice()),
            (small(), [1.0 / 3.0, 1.0, 2.0 / 3.0, 0.0].as_slice()),
        ] {
            let d = degree_index(&p).unwrap();
            let u = adjusted_ubiquity(&p, &d).unwrap();
            let n = proximity(&p, &d, &u).unwrap();
            assert!(close(n.values.as_slice(), expect), "{:?}", n.values);
        }
    }

    #[test]
    fn similarity_hand_values() {
        let p = worked();
        let d = degree_index(&p).unwrap();
        let u = adjusted_ubiquity(&p, &d).unwrap();
        let s = similarity(&proximity(&p, &d, &u).unwrap());
        let ninth = 1.0 / 9.0;
        assert!(close(
            s.u.as_slice(),
            &[4.0 * ninth, 2.0 * ninth, 0.0, 2.0 * ninth, 2.0 * ninth, 2.0 * ninth, 0.0, 2.0 * ninth, 4.0 * ninth]
        ));
        assert!(close(s.v.as_slice(), &[5.0 * ninth, ninth, ninth, 5.0 * ninth]));
    }

    #[test]
    fn single_nonzero_entry_gives_rank_one_blocks() {
        let n = ProximityMatrix {
            values: Matrix::from_rows(&[[0.0, 0.0], [0.0, 3.0], [0.0, 0.0]]).unwrap(),
        };
        let s = similarity(&n);
        assert_eq!(s.u.as_slice(), &[0.0, 0.0, 0.0, 0.0, 9.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(s.v.as_slice(), &[0.0, 0.0, 0.0, 9.0]);
    }

    #[test]
    fn proximity_is_invariant_to_power_of_two_rescale() {
        let p = ScorePanel::from_rows("t", &["a", "b", "c"], &["x", "y"], &[[13.7, 2.9], [88.1, 41.3], [5.5, 99.0]])
            .unwrap();
        let q = p.scaled(0.125);
        let n = |p: &ScorePanel| {
            let d = degree_index(p).unwrap();
            let u = adjusted_ubiquity(p, &d).unwrap();
            proximity(p, &d, &u).unwrap()
        };
        assert_eq!(n(&p), n(&q));
    }

    #[test]
    fn proximity_is_invariant_to_exact_integer_rescale() {
        let p = ScorePanel::from_rows("t", &["a", "b", "c"], &["x", "y", "z"], &[[13.0, 2.0, 7.0], [88.0, 41.0, 1.0], [5.0, 99.0, 60.0]])
            .unwrap();
        let n = |p: &ScorePanel| {
            let d = degree_index(p).unwrap();
            let u = adjusted_ubiquity(p, &d).unwrap();
            proximity(p, &d, &u).unwrap()
        };
        for c in [3.0, 7.0, 10.0, 37.0] {
            assert_eq!(n(&p), n(&p.scaled(c)));
        }
    }
}
