use crate::complex::{boundary_faces, SimplicialComplex};
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Signed incidence of `S_{q-1} × S_q`. Every column holds exactly `q + 1`
/// entries, stored contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryMatrix {
    q: usize,
    nrows: usize,
    ncols: usize,
    rows: Vec<usize>,
    signs: Vec<i8>,
}

impl BoundaryMatrix {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// `(row, sign)` entries of column `j`.
    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, i8)> + '_ {
        let span = j * (self.q + 1)..(j + 1) * (self.q + 1);
        self.rows[span.clone()]
            .iter()
            .copied()
            .zip(self.signs[span].iter().copied())
    }

    /// Entries grouped by row: for each (q-1)-simplex, its `(column, sign)` cofaces.
    pub fn rows_view(&self) -> Vec<Vec<(usize, i8)>> {
        let mut out = vec![Vec::new(); self.nrows];
        for j in 0..self.ncols {
            for (i, s) in self.column(j) {
                out[i].push((j, s));
            }
        }
        out
    }

    pub fn to_csr(&self) -> CsrMatrix {
        let triplets = (0..self.ncols)
            .flat_map(|j| self.column(j).map(move |(i, s)| (i, j, s as f64)))
            .collect();
        CsrMatrix::from_triplets(self.nrows, self.ncols, triplets)
    }

    /// Sparse product `self · other`; `other` must be the next boundary up.
    pub fn compose(&self, other: &BoundaryMatrix) -> Result<CsrMatrix> {
        if other.nrows != self.ncols {
            return Err(Error::DimensionMismatch {
                context: "boundary composition",
                expected: self.ncols,
                found: other.nrows,
            });
        }
        let mut triplets = Vec::new();
        for j in 0..other.ncols {
            for (mid, s2) in other.column(j) {
                for (i, s1) in self.column(mid) {
                    triplets.push((i, j, (s1 * s2) as f64));
                }
            }
        }
        Ok(CsrMatrix::from_triplets(self.nrows, other.ncols, triplets))
    }
}

/// Boundary matrix `∂_q`: the column of `σ ∈ S_q` holds `sgn(τ, ∂σ)` at the
/// rows of its faces `τ ∈ S_{q-1}`.
pub fn assemble_boundary(k: &SimplicialComplex, q: usize) -> Result<BoundaryMatrix> {
    if q == 0 {
        return Err(Error::invalid("boundary matrices start at q = 1"));
    }
    if k.count(q) == 0 {
        return Err(Error::NoSimplicesAtDimension { q });
    }
    let ncols = k.count(q);
    let mut rows = Vec::with_capacity(ncols * (q + 1));
    let mut signs = Vec::with_capacity(ncols * (q + 1));
    for s in k.simplices(q) {
        for (face, sign) in boundary_faces(s) {
            rows.push(k.index_of(&face).expect("complex is closed"));
            signs.push(sign);
        }
    }
    Ok(BoundaryMatrix {
        q,
        nrows: k.count(q - 1),
        ncols,
        rows,
        signs,
    })
}
