//! Independent reference computations for the genepy test suites.
//!
//! Nothing in here depends on `genepy-core`. Every routine is the
//! textbook or brute-force version of something the library computes by a
//! different route, so agreement between the two is evidence rather than
//! tautology.

use rand::Rng;

/// Dense row-major square matrix as nested vectors.
pub type Dense = Vec<Vec<f64>>;

/// Cyclic Jacobi eigen-decomposition of a real symmetric matrix.
///
/// Returns `(eigenvalues, eigenvectors)` sorted by descending eigenvalue;
/// `eigenvectors[k]` is the unit vector belonging to `eigenvalues[k]`.
pub fn jacobi_eigen(a: &Dense) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut m = a.clone();
    let mut v: Dense = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        let scale: f64 = (0..n).map(|i| m[i][i] * m[i][i]).sum::<f64>().max(1e-300);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q] == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[y][y].total_cmp(&m[x][x]));
    let values = order.iter().map(|&k| m[k][k]).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|i| v[i][k]).collect())
        .collect();
    (values, vectors)
}

/// Dominant eigenpair of the symmetric 2x2 matrix `[[a, b], [b, d]]` from
/// the characteristic polynomial `λ² − (a+d)λ + (ad − b²) = 0`.
///
/// The eigenvector is returned with unit Euclidean norm and non-negative sum.
pub fn symmetric_2x2_top(a: f64, b: f64, d: f64) -> (f64, [f64; 2]) {
    let half_trace = (a + d) / 2.0;
    let det = a * d - b * b;
    let lambda = half_trace + (half_trace * half_trace - det).sqrt();
    // (M - λI) v = 0  =>  v ∝ (b, λ - a), or (λ - d, b) when b vanishes.
    let (x, y) = if b.abs() > 0.0 {
        (b, lambda - a)
    } else if a >= d {
        (1.0, 0.0)
    } else {
        (0.0, 1.0)
    };
    let norm = (x * x + y * y).sqrt();
    let (mut x, mut y) = (x / norm, y / norm);
    if x + y < 0.0 {
        x = -x;
        y = -y;
    }
    (lambda, [x, y])
}

/// Textbook Spearman coefficient for tie-free rankings,
/// `1 − 6 Σ d² / (n (n² − 1))`.
pub fn spearman_textbook(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

/// Average ranks of `values` in descending order (rank 1 = largest), by
/// direct counting: `1 + #greater + (#equal − 1) / 2`.
pub fn average_ranks_desc(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .map(|&x| {
            let greater = values.iter().filter(|&&y| y > x).count() as f64;
            let equal = values.iter().filter(|&&y| y == x).count() as f64;
            1.0 + greater + (equal - 1.0) / 2.0
        })
        .collect()
}

/// Sample Pearson correlation.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma) * (x - ma)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb) * (y - mb)).sum();
    cov / (va * vb).sqrt()
}

/// `A Aᵀ` and `Aᵀ A` by the naive triple loop.
pub fn gram_pair(a: &Dense) -> (Dense, Dense) {
    let rows = a.len();
    let cols = a[0].len();
    let aat = (0..rows)
        .map(|i| (0..rows).map(|j| (0..cols).map(|k| a[i][k] * a[j][k]).sum()).collect())
        .collect();
    let ata = (0..cols)
        .map(|i| (0..cols).map(|j| (0..rows).map(|k| a[k][i] * a[k][j]).sum()).collect())
        .collect();
    (aat, ata)
}

/// Largest componentwise distance between the directions of `u` and `v`
/// after scaling both to unit Euclidean norm and aligning signs.
pub fn direction_error(u: &[f64], v: &[f64]) -> f64 {
    let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let dist = |sign: f64| {
        u.iter()
            .zip(v)
            .map(|(x, y)| (x / nu - sign * y / nv).abs())
            .fold(0.0, f64::max)
    };
    dist(1.0).min(dist(-1.0))
}

/// Rescale `v` so its arithmetic mean is one.
pub fn mean_one(v: &[f64]) -> Vec<f64> {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| x / mean).collect()
}

/// Matrix with entries drawn uniformly from `[lo, hi)`.
pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, lo: f64, hi: f64) -> Dense {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_range(lo..hi)).collect())
        .collect()
}

/// `1 + eps * noise` with noise uniform in `[-1, 1)`; a small perturbation of
/// the all-ones matrix.
pub fn perturbed_uniform<R: Rng>(rng: &mut R, rows: usize, cols: usize, eps: f64) -> Dense {
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| 1.0 + eps * rng.random_range(-1.0..1.0))
                .collect()
        })
        .collect()
}
