//! Betti numbers from ranks of unweighted boundary matrices.
//!
//! Ranks are computed by dense Gaussian elimination with partial pivoting and
//! a relative pivot tolerance, which is fine for the small and mid-sized
//! complexes these numbers are used to check.

use super::{boundary_faces, SimplicialComplex};
use crate::error::{Error, Result};

const RANK_TOLERANCE: f64 = 1e-9;

/// Rank of the boundary map from q-chains to (q-1)-chains. Zero for `q = 0`
/// or when either side is empty.
pub fn boundary_rank(k: &SimplicialComplex, q: usize) -> usize {
    if q == 0 || k.count(q) == 0 || k.count(q - 1) == 0 {
        return 0;
    }
    let rows = k.count(q - 1);
    let cols = k.count(q);
    let mut m = vec![0.0; rows * cols];
    for (j, s) in k.simplices(q).iter().enumerate() {
        for (face, sign) in boundary_faces(s) {
            let i = k.index_of(&face).expect("complex is closed");
            m[i * cols + j] = sign as f64;
        }
    }
    dense_rank(&mut m, rows, cols)
}

fn dense_rank(m: &mut [f64], rows: usize, cols: usize) -> usize {
    let scale = m.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    if scale == 0.0 {
        return 0;
    }
    let tol = RANK_TOLERANCE * scale;
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let (pivot, best) = (rank..rows)
            .map(|r| (r, m[r * cols + c].abs()))
            .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= tol {
            continue;
        }
        if pivot != rank {
            for j in c..cols {
                m.swap(pivot * cols + j, rank * cols + j);
            }
        }
        let p = m[rank * cols + c];
        for r in (rank + 1)..rows {
            let factor = m[r * cols + c] / p;
            if factor != 0.0 {
                for j in c..cols {
                    m[r * cols + j] -= factor * m[rank * cols + j];
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `β_q = |S_q| - rank ∂_q - rank ∂_{q+1}` for `q = 0..=max_q`.
pub fn betti_numbers(k: &SimplicialComplex, max_q: usize) -> Result<Vec<usize>> {
    if max_q > k.top_dim() {
        return Err(Error::invalid(format!(
            "max_q {max_q} exceeds the top dimension {} of the complex",
            k.top_dim()
        )));
    }
    let ranks: Vec<usize> = (0..=max_q + 1).map(|q| boundary_rank(k, q)).collect();
    Ok((0..=max_q)
        .map(|q| k.count(q) - ranks[q] - ranks[q + 1])
        .collect())
}
