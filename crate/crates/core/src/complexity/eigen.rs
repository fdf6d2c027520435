//! Power iteration for symmetric non-negative matrices.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use super::{EigenError, SolverOptions};
use crate::abs;
use crate::matrix::Matrix;

/// Largest relative asymmetry accepted as "symmetric".
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Eigenpair {
    /// Rayleigh quotient of `vector`.
    pub value: f64,
    /// Unit Euclidean norm, oriented to a positive entry sum.
    pub vector: Vec<f64>,
    pub steps: usize,
    /// `‖Mv − λv‖∞ / λ` at the returned vector.
    pub residual: f64,
    pub converged: bool,
}

/// Dominant eigenpair of a symmetric, entrywise non-negative matrix.
///
/// Iterates `v ← Mv / ‖Mv‖₂` from the uniform positive vector and stops
/// once `‖Mv − λv‖∞ / λ ≤ tol`, with `λ = vᵀMv`. On a degenerate leading
/// eigenvalue the limit reached from the uniform start is returned, so the
/// identity matrix yields the uniform vector after one step.
pub fn principal_eigenvector(m: &Matrix, opts: &SolverOptions) -> Result<Eigenpair, EigenError> {
    check_input(m)?;
    let n = m.rows();
    let start = vec![1.0 / libm::sqrt(n as f64); n];
    let pair = iterate(m, start, &[], opts, 0.0);
    finish(pair, opts)
}

/// The `count` leading eigenpairs by power iteration with deflation.
///
/// The first pair is exactly [`principal_eigenvector`]. Later pairs are
/// found from a fixed non-uniform start, re-orthogonalized against earlier
/// vectors every step; their residuals are measured relative to the
/// dominant eigenvalue. Eigenvalues at round-off level are reported as zero.
pub fn leading_eigenpairs(
    m: &Matrix,
    count: usize,
    opts: &SolverOptions,
) -> Result<Vec<Eigenpair>, EigenError> {
    let first = principal_eigenvector(m, opts)?;
    let scale = first.value;
    let n = m.rows();
    let mut pairs = vec![first];
    while pairs.len() < count.min(n) {
        // golden-ratio sequence: deterministic and not orthogonal to any
        // particular eigenvector in practice
        let start: Vec<f64> = (0..n)
            .map(|i| {
                let t = (i + 1) as f64 * 0.618_033_988_749_895;
                0.5 + (t - libm::floor(t))
            })
            .collect();
        let basis: Vec<Vec<f64>> = pairs.iter().map(|p| p.vector.clone()).collect();
        let pair = iterate(m, start, &basis, opts, scale);
        pairs.push(finish(pair, opts)?);
    }
    Ok(pairs)
}

fn check_input(m: &Matrix) -> Result<(), EigenError> {
    if !m.is_square() {
        return Err(EigenError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() == 0 {
        return Err(EigenError::Empty);
    }
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let x = m[(i, j)];
            if !x.is_finite() || x < 0.0 {
                return Err(EigenError::InvalidEntry { row: i, column: j });
            }
        }
    }
    let asymmetry = m.max_relative_asymmetry();
    if asymmetry > SYMMETRY_TOL {
        return Err(EigenError::Asymmetric { asymmetry });
    }
    if m.as_slice().iter().all(|&x| x == 0.0) {
        return Err(EigenError::ZeroMatrix);
    }
    Ok(())
}

fn finish(pair: Eigenpair, opts: &SolverOptions) -> Result<Eigenpair, EigenError> {
    if pair.converged || !opts.require_convergence {
        Ok(pair)
    } else {
        Err(EigenError::NotConverged {
            steps: pair.steps,
            residual: pair.residual,
            estimate: Box::new(pair),
        })
    }
}

fn norm2(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn project_out(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let c = dot(v, b);
        for (x, y) in v.iter_mut().zip(b) {
            *x -= c * y;
        }
    }
}

/// Core loop. `basis` holds unit vectors to deflate against; `scale` is the
/// reference eigenvalue for residuals when deflating (0 = use own λ).
fn iterate(m: &Matrix, mut v: Vec<f64>, basis: &[Vec<f64>], opts: &SolverOptions, scale: f64) -> Eigenpair {
    project_out(&mut v, basis);
    let nv = norm2(&v);
    for x in v.iter_mut() {
        *x /= nv;
    }

    let mut value = 0.0;
    let mut residual = f64::INFINITY;
    let mut steps = 0;
    let mut converged = false;
    while steps < opts.max_steps {
        steps += 1;
        let mut w = m.mul_vec(&v);
        project_out(&mut w, basis);
        value = dot(&v, &w);
        let reference = if scale > 0.0 { scale } else { abs(value) };
        let wn = norm2(&w);
        if !basis.is_empty() && wn <= 1e-14 * reference {
            // remaining spectrum is numerically zero; v spans part of the kernel
            value = 0.0;
            residual = wn / reference;
            converged = true;
            break;
        }
        residual = w
            .iter()
            .zip(&v)
            .fold(0.0f64, |acc, (wi, vi)| acc.max(abs(wi - value * vi)))
            / reference;
        if residual <= opts.tol {
            converged = true;
            break;
        }
        for (x, wi) in v.iter_mut().zip(&w) {
            *x = wi / wn;
        }
    }
    orient(&mut v);
    Eigenpair {
        value,
        vector: v,
        steps,
        residual,
        converged,
    }
}

/// Flip so the entry sum is positive; when the sum is at round-off level,
/// make the largest-magnitude entry positive instead.
fn orient(v: &mut [f64]) {
    let sum: f64 = v.iter().sum();
    let flip = if abs(sum) > 1e-12 {
        sum < 0.0
    } else {
        v.iter()
            .copied()
            .fold(0.0f64, |best, x| if abs(x) > abs(best) { x } else { best })
            < 0.0
    };
    if flip {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}
