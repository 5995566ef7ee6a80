use rayon::prelude::*;

use super::{DistanceMatrix, Simplex, SimplicialComplex};
use crate::error::{Error, Result};

/// Vietoris-Rips complex at scale `epsilon`: `{i, j}` is an edge iff
/// `d[i][j] <= epsilon`, and every clique of up to `max_dim + 1` vertices is
/// a simplex. Ties are included.
pub fn build_vietoris_rips(
    dist: &DistanceMatrix,
    epsilon: f64,
    max_dim: usize,
) -> Result<SimplicialComplex> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::invalid(format!("epsilon must be positive and finite, got {epsilon}")));
    }
    let n = dist.len();

    // Higher-indexed neighbours, ascending.
    let upper: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let row = dist.row(i);
            ((i + 1)..n).filter(|&j| row[j] <= epsilon).collect()
        })
        .collect();

    let per_root: Vec<Vec<Vec<Simplex>>> = (0..n)
        .into_par_iter()
        .map(|root| {
            let mut out = vec![Vec::new(); max_dim + 1];
            let mut stack = vec![root];
            expand(&upper, &mut stack, &upper[root], max_dim, &mut out);
            out
        })
        .collect();

    let mut by_dim: Vec<Vec<Simplex>> = vec![Vec::new(); max_dim + 1];
    for lists in per_root {
        for (q, mut list) in lists.into_iter().enumerate() {
            by_dim[q].append(&mut list);
        }
    }
    SimplicialComplex::from_sorted_lists(n, by_dim, Some(epsilon))
}

/// Depth-first clique enumeration. `candidates` are the common upper
/// neighbours of every vertex already on the stack.
fn expand(
    upper: &[Vec<usize>],
    stack: &mut Vec<usize>,
    candidates: &[usize],
    max_dim: usize,
    out: &mut [Vec<Simplex>],
) {
    out[stack.len() - 1].push(Simplex::from_sorted_unchecked(stack.clone()));
    if stack.len() > max_dim {
        return;
    }
    for (pos, &v) in candidates.iter().enumerate() {
        let next = intersect_sorted(&candidates[pos + 1..], &upper[v]);
        stack.push(v);
        expand(upper, stack, &next, max_dim, out);
        stack.pop();
    }
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
