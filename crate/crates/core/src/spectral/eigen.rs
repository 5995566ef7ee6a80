//! Smallest eigenpairs of a weighted Laplacian.
//!
//! The weighted problem `L y = λ y` with `L` self-adjoint in `⟨·,·⟩_K` is
//! solved through the symmetric conjugate `S = W^{1/2} L W^{-1/2}`; an
//! eigenvector `z` of `S` maps back to `y = W^{-1/2} z`, so returned vectors
//! are orthonormal in the weighted inner product. Residuals are measured in
//! the same norm, i.e. `‖S z - λ z‖₂`.
//!
//! Small problems use a dense symmetric solver. Larger ones use Lanczos with
//! full reorthogonalisation and locking: converged bottom Ritz pairs are
//! locked, the next run starts orthogonal to them, and the search ends once a
//! fresh run finds nothing below the m-th locked value.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cochain::Cochain;
use super::laplacian::LaplacianOperator;
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Problems up to this size go to the dense solver under [`Solver::Auto`].
pub const DENSE_LIMIT: usize = 512;

const LOCK_TOLERANCE: f64 = 1e-10;
const RESIDUAL_CONTRACT: f64 = 1e-8;
const MAX_RUNS: usize = 500;
const LANCZOS_SEED: u64 = 0x5eed_1a9c;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Solver {
    #[default]
    Auto,
    Dense,
    Lanczos,
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    pub q: usize,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Cochain>,
    pub residuals: Vec<f64>,
}

/// The `m` smallest eigenpairs of `l`.
pub fn eigendecompose(l: &LaplacianOperator, m: usize) -> Result<Spectrum> {
    eigendecompose_with(l, m, Solver::Auto)
}

pub fn eigendecompose_with(l: &LaplacianOperator, m: usize, solver: Solver) -> Result<Spectrum> {
    let n = l.dim();
    if m == 0 || m > n {
        return Err(Error::invalid(format!(
            "requested {m} eigenpairs from an operator of dimension {n}"
        )));
    }
    let s = l.symmetrized();
    let dense = match solver {
        Solver::Auto => n <= DENSE_LIMIT,
        Solver::Dense => true,
        Solver::Lanczos => false,
    };
    let (values, vectors) = if dense {
        dense_smallest(&s, m)
    } else {
        lanczos_smallest(&|x, y| s.mul_vec_into(x, y), n, m, s.gershgorin_radius())?
    };

    let mut residuals = Vec::with_capacity(m);
    let mut eigenvectors = Vec::with_capacity(m);
    let mut buf = vec![0.0; n];
    for (lambda, z) in values.iter().zip(&vectors) {
        s.mul_vec_into(z, &mut buf);
        let r = buf
            .iter()
            .zip(z)
            .map(|(a, b)| (a - lambda * b).powi(2))
            .sum::<f64>()
            .sqrt();
        residuals.push(r);
        let mut y: Vec<f64> = z.iter().zip(l.weights()).map(|(z, w)| z / w.sqrt()).collect();
        fix_sign(&mut y);
        eigenvectors.push(Cochain::new(l.q(), y));
    }
    if values
        .iter()
        .zip(&residuals)
        .any(|(lambda, r)| !(*r <= RESIDUAL_CONTRACT * lambda.abs().max(1.0)))
    {
        return Err(Error::ConvergenceFailure { residuals });
    }
    Ok(Spectrum {
        q: l.q(),
        eigenvalues: values,
        eigenvectors,
        residuals,
    })
}

/// `(λ_min, λ_max)` of `l`.
pub fn spectral_bounds(l: &LaplacianOperator) -> Result<(f64, f64)> {
    let s = l.symmetrized();
    let n = l.dim();
    if n == 0 {
        return Err(Error::NoSimplicesAtDimension { q: l.q() });
    }
    if n <= DENSE_LIMIT {
        let eig = SymmetricEigen::new(s.to_dense());
        let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        let max = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        return Ok((min, max));
    }
    let radius = s.gershgorin_radius();
    let (low, _) = lanczos_smallest(&|x, y| s.mul_vec_into(x, y), n, 1, radius)?;
    let negated = |x: &[f64], y: &mut [f64]| {
        s.mul_vec_into(x, y);
        y.iter_mut().for_each(|v| *v = -*v);
    };
    let (high, _) = lanczos_smallest(&negated, n, 1, radius)?;
    Ok((low[0], -high[0]))
}

/// Makes the entry of largest magnitude positive.
fn fix_sign(y: &mut [f64]) {
    let mut best = 0.0_f64;
    let mut sign = 1.0;
    for &v in y.iter() {
        if v.abs() > best {
            best = v.abs();
            sign = v.signum();
        }
    }
    if sign < 0.0 {
        y.iter_mut().for_each(|v| *v = -*v);
    }
}

fn dense_smallest(s: &CsrMatrix, m: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let eig = SymmetricEigen::new(s.to_dense());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    order
        .into_iter()
        .take(m)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors.column(i).iter().copied().collect()))
        .unzip()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(y, x)| *y += alpha * x);
}

fn orthogonalize(v: &mut [f64], against: &[Vec<f64>]) {
    // two passes of classical Gram-Schmidt
    for _ in 0..2 {
        for u in against {
            let c = dot(u, v);
            axpy(-c, u, v);
        }
    }
}

struct LanczosRun {
    basis: Vec<Vec<f64>>,
    ritz_values: Vec<f64>,
    /// Eigenvectors of the tridiagonal matrix, one column per Ritz value.
    ritz_coeffs: DMatrix<f64>,
    /// Residual estimates `|β_k s_{k,i}|`.
    estimates: Vec<f64>,
}

fn lanczos_run(
    op: &dyn Fn(&[f64], &mut [f64]),
    start: Vec<f64>,
    steps: usize,
    locked: &[Vec<f64>],
    scale: f64,
) -> LanczosRun {
    let n = start.len();
    let mut basis: Vec<Vec<f64>> = vec![start];
    let mut alpha = Vec::with_capacity(steps);
    let mut beta: Vec<f64> = Vec::with_capacity(steps);
    let mut w = vec![0.0; n];
    let last_beta = loop {
        let j = basis.len() - 1;
        op(&basis[j], &mut w);
        let a = dot(&basis[j], &w);
        alpha.push(a);
        axpy(-a, &basis[j], &mut w);
        if j > 0 {
            axpy(-beta[j - 1], &basis[j - 1], &mut w);
        }
        orthogonalize(&mut w, locked);
        orthogonalize(&mut w, &basis);
        let b = dot(&w, &w).sqrt();
        let breakdown = b <= 1e-12 * scale.max(1.0);
        if basis.len() == steps || breakdown {
            break if breakdown { 0.0 } else { b };
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    };

    let k = alpha.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let ritz_values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let ritz_coeffs = DMatrix::from_fn(k, k, |r, c| eig.eigenvectors[(r, order[c])]);
    let estimates = (0..k).map(|c| (last_beta * ritz_coeffs[(k - 1, c)]).abs()).collect();
    LanczosRun {
        basis,
        ritz_values,
        ritz_coeffs,
        estimates,
    }
}

fn ritz_vector(run: &LanczosRun, c: usize) -> Vec<f64> {
    let n = run.basis[0].len();
    let mut y = vec![0.0; n];
    for (r, v) in run.basis.iter().enumerate() {
        axpy(run.ritz_coeffs[(r, c)], v, &mut y);
    }
    let norm = dot(&y, &y).sqrt();
    y.iter_mut().for_each(|x| *x /= norm);
    y
}

fn lanczos_smallest(
    op: &dyn Fn(&[f64], &mut [f64]),
    n: usize,
    m: usize,
    scale: f64,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(LANCZOS_SEED);
    let mut locked_vals: Vec<f64> = Vec::new();
    let mut locked: Vec<Vec<f64>> = Vec::new();
    let mut steps = (2 * m + 20).max(40);
    let mut buf = vec![0.0; n];
    let mut worst = Vec::new();

    for _ in 0..MAX_RUNS {
        let remaining = n - locked.len();
        if remaining == 0 {
            break;
        }
        let mut start: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        orthogonalize(&mut start, &locked);
        let norm = dot(&start, &start).sqrt();
        if norm < 1e-8 {
            break;
        }
        start.iter_mut().for_each(|x| *x /= norm);

        let run = lanczos_run(op, start, steps.min(remaining), &locked, scale);
        let threshold = if locked_vals.len() >= m {
            let mut sorted = locked_vals.clone();
            sorted.sort_by(f64::total_cmp);
            Some(sorted[m - 1])
        } else {
            None
        };

        let mut newly = 0;
        worst.clear();
        for c in 0..run.ritz_values.len() {
            let theta = run.ritz_values[c];
            let tol = LOCK_TOLERANCE * theta.abs().max(1.0);
            if run.estimates[c] > tol {
                worst.push(run.estimates[c]);
                break;
            }
            if let Some(limit) = threshold {
                if theta >= limit - tol {
                    break;
                }
            }
            let y = ritz_vector(&run, c);
            op(&y, &mut buf);
            let resid = buf.iter().zip(&y).map(|(a, b)| (a - theta * b).powi(2)).sum::<f64>().sqrt();
            if resid > tol * 10.0 {
                worst.push(resid);
                break;
            }
            locked_vals.push(theta);
            locked.push(y);
            newly += 1;
        }

        if newly == 0 {
            if let Some(limit) = threshold {
                // A converged bottom Ritz value at or above the m-th locked
                // value confirms nothing smaller was missed.
                let theta = run.ritz_values[0];
                if run.estimates[0] <= LOCK_TOLERANCE * theta.abs().max(1.0)
                    && theta >= limit - LOCK_TOLERANCE * theta.abs().max(1.0)
                {
                    break;
                }
            }
            if steps < remaining {
                steps = (steps * 2).min(remaining);
            }
        }
    }

    if locked.len() < m {
        return Err(Error::ConvergenceFailure { residuals: worst });
    }
    let mut order: Vec<usize> = (0..locked.len()).collect();
    order.sort_by(|&a, &b| locked_vals[a].total_cmp(&locked_vals[b]));
    Ok(order
        .into_iter()
        .take(m)
        .map(|i| (locked_vals[i], locked[i].clone()))
        .unzip())
}
