//! Independent dense oracles shared by the integration suites.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use simplicial_score::complex::{build_vietoris_rips, compute_distances, Metric, SimplicialComplex};

/// Signed incidence matrix from `S_q` to `S_{q-1}`, built from vertex lists:
/// deleting the vertex at position `i` contributes `(-1)^i`.
pub fn dense_boundary(k: &SimplicialComplex, q: usize) -> DMatrix<f64> {
    let rows = k.simplices(q - 1);
    let cols = k.simplices(q);
    let mut b = DMatrix::zeros(rows.len(), cols.len());
    for (j, s) in cols.iter().enumerate() {
        let v = s.vertices();
        for i in 0..v.len() {
            let face: Vec<usize> = v.iter().enumerate().filter(|&(p, _)| p != i).map(|(_, &x)| x).collect();
            let r = rows.iter().position(|t| t.vertices() == face.as_slice()).expect("face present");
            b[(r, j)] = if i % 2 == 0 { 1.0 } else { -1.0 };
        }
    }
    b
}

fn diag(w: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_row_slice(w))
}

/// `W_q^{-1} B_{q+1} W_{q+1} B_{q+1}^T + B_q^T W_{q-1}^{-1} B_q W_q` as a
/// dense matrix.
pub fn dense_laplacian(k: &SimplicialComplex, q: usize) -> DMatrix<f64> {
    let n = k.count(q);
    let w = k.weights(q).unwrap();
    let w_inv: Vec<f64> = w.iter().map(|x| 1.0 / x).collect();
    let mut l = DMatrix::zeros(n, n);
    if k.count(q + 1) > 0 {
        let b = dense_boundary(k, q + 1);
        l += diag(&w_inv) * &b * diag(k.weights(q + 1).unwrap()) * b.transpose();
    }
    if q >= 1 {
        let b = dense_boundary(k, q);
        let wd: Vec<f64> = k.weights(q - 1).unwrap().iter().map(|x| 1.0 / x).collect();
        l += b.transpose() * diag(&wd) * &b * diag(w);
    }
    l
}

/// Ascending eigenvalues of `L` through the similar symmetric matrix
/// `W^{1/2} L W^{-1/2}`.
pub fn dense_spectrum(k: &SimplicialComplex, q: usize) -> Vec<f64> {
    let l = dense_laplacian(k, q);
    let w = k.weights(q).unwrap();
    let s: Vec<f64> = w.iter().map(|x| x.sqrt()).collect();
    let s_inv: Vec<f64> = s.iter().map(|x| 1.0 / x).collect();
    let m = diag(&s) * l * diag(&s_inv);
    let m = (&m + m.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Graph Laplacian score of a weighted adjacency matrix: degree-weighted
/// centering, then `f~' (D - A) f~ / f~' D f~`.
pub fn graph_laplacian_score(adj: &[Vec<f64>], f: &[f64]) -> f64 {
    let n = f.len();
    let d: Vec<f64> = adj.iter().map(|r| r.iter().sum()).collect();
    let mean = (0..n).map(|i| d[i] * f[i]).sum::<f64>() / d.iter().sum::<f64>();
    let g: Vec<f64> = f.iter().map(|x| x - mean).collect();
    let mut num = 0.0;
    for i in 0..n {
        for j in 0..n {
            let lij = if i == j { d[i] - adj[i][j] } else { -adj[i][j] };
            num += g[i] * lij * g[j];
        }
    }
    let den: f64 = (0..n).map(|i| d[i] * g[i] * g[i]).sum();
    num / den
}

pub fn uniform_points<R: Rng>(rng: &mut R, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..dim).map(|_| rng.random::<f64>()).collect()).collect()
}

pub fn normal<R: Rng>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

pub fn rips(points: &[Vec<f64>], epsilon: f64, max_dim: usize) -> SimplicialComplex {
    let d = compute_distances(points, Metric::Euclidean).unwrap();
    build_vietoris_rips(&d, epsilon, max_dim).unwrap()
}

/// Closure of a list of maximal simplices.
pub fn closure(vertex_count: usize, maximal: &[&[usize]]) -> SimplicialComplex {
    let mut all = std::collections::BTreeSet::new();
    for m in maximal {
        for mask in 1u32..(1 << m.len()) {
            all.insert((0..m.len()).filter(|i| mask & (1 << i) != 0).map(|i| m[i]).collect::<Vec<_>>());
        }
    }
    SimplicialComplex::from_simplices(vertex_count, all).unwrap()
}

pub fn cycle(n: usize) -> SimplicialComplex {
    let mut s: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    s.extend((0..n).map(|v| {
        let (a, b) = (v, (v + 1) % n);
        vec![a.min(b), a.max(b)]
    }));
    SimplicialComplex::from_simplices(n, s).unwrap()
}

/// Area under the ROC curve of `scores` for separating `positive` from the
/// rest, with ties counted as one half.
pub fn auc(scores: &[f64], positive: &[bool]) -> f64 {
    let pos: Vec<f64> = scores.iter().zip(positive).filter(|(_, &p)| p).map(|(s, _)| *s).collect();
    let neg: Vec<f64> = scores.iter().zip(positive).filter(|(_, &p)| !p).map(|(s, _)| *s).collect();
    let mut wins = 0.0;
    for a in &pos {
        for b in &neg {
            wins += if a > b {
                1.0
            } else if a == b {
                0.5
            } else {
                0.0
            };
        }
    }
    wins / (pos.len() * neg.len()) as f64
}

/// Asymptotic two-sided Kolmogorov-Smirnov p-value of a sample against U(0, 1).
pub fn ks_uniform_pvalue(sample: &[f64]) -> f64 {
    let mut x = sample.to_vec();
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    let d = x
        .iter()
        .enumerate()
        .map(|(i, &v)| ((i as f64 + 1.0) / n - v).max(v - i as f64 / n))
        .fold(0.0, f64::max);
    // Kolmogorov distribution with the small-sample correction of Stephens.
    let t = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
    let mut p = 0.0;
    for j in 1..=100 {
        let j = j as f64;
        p += 2.0 * (-1.0f64).powf(j - 1.0) * (-2.0 * j * j * t * t).exp();
    }
    p.clamp(0.0, 1.0)
}

pub fn median(v: &[f64]) -> f64 {
    let mut x = v.to_vec();
    x.sort_by(f64::total_cmp);
    let n = x.len();
    if n % 2 == 1 {
        x[n / 2]
    } else {
        0.5 * (x[n / 2 - 1] + x[n / 2])
    }
}
