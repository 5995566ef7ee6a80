//! Minimal compressed-sparse-row storage used for boundary products and
//! Laplacian forms.

use nalgebra::DMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            indptr: vec![0; nrows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(nrows: usize, ncols: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_unstable_by_key(|t| (t.0, t.1));
        let mut indptr = vec![0; nrows + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            debug_assert!(r < nrows && c < ncols);
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                values.push(v);
                indptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..nrows {
            indptr[i + 1] += indptr[i];
        }
        Self {
            nrows,
            ncols,
            indptr,
            indices,
            values,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.indptr[i]..self.indptr[i + 1];
        self.indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let span = self.indptr[i]..self.indptr[i + 1];
        match self.indices[span.clone()].binary_search(&j) {
            Ok(pos) => self.values[span.start + pos],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec_into(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(out.len(), self.nrows);
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.indptr[i]..self.indptr[i + 1] {
                acc += self.values[k] * x[self.indices[k]];
            }
            *o = acc;
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.nrows];
        self.mul_vec_into(x, &mut out);
        out
    }

    /// `xᵀ A x` for a square matrix.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(self.nrows, self.ncols);
        let mut total = 0.0;
        for (i, xi) in x.iter().enumerate() {
            let mut acc = 0.0;
            for k in self.indptr[i]..self.indptr[i + 1] {
                acc += self.values[k] * x[self.indices[k]];
            }
            total += xi * acc;
        }
        total
    }

    /// Row-scales the matrix in place: `A <- diag(s) A`.
    pub fn scale_rows(&mut self, s: &[f64]) {
        for (i, si) in s.iter().enumerate() {
            for k in self.indptr[i]..self.indptr[i + 1] {
                self.values[k] *= si;
            }
        }
    }

    /// `diag(l) A diag(r)`.
    pub fn scaled(&self, l: &[f64], r: &[f64]) -> Self {
        let mut out = self.clone();
        for (i, li) in l.iter().enumerate().take(self.nrows) {
            for k in out.indptr[i]..out.indptr[i + 1] {
                out.values[k] *= li * r[out.indices[k]];
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut triplets = Vec::with_capacity(self.nnz() + other.nnz());
        for m in [self, other] {
            for i in 0..m.nrows {
                triplets.extend(m.row(i).map(|(j, v)| (i, j, v)));
            }
        }
        Self::from_triplets(self.nrows, self.ncols, triplets)
    }

    pub fn transpose(&self) -> Self {
        let mut triplets = Vec::with_capacity(self.nnz());
        for i in 0..self.nrows {
            triplets.extend(self.row(i).map(|(j, v)| (j, i, v)));
        }
        Self::from_triplets(self.ncols, self.nrows, triplets)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.nrows, self.ncols);
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                d[(i, j)] += v;
            }
        }
        d
    }

    /// Largest absolute value of `A - Aᵀ`, relative to the largest entry.
    pub fn asymmetry(&self) -> f64 {
        let scale = self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0_f64;
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst / scale
    }

    /// Gershgorin bound on the spectral radius.
    pub fn gershgorin_radius(&self) -> f64 {
        (0..self.nrows)
            .map(|i| self.row(i).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}
