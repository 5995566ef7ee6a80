use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Euclidean,
    /// `1 - r` with `r` the Pearson correlation of two rows; ranges over `[0, 2]`.
    Correlation,
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "correlation" => Ok(Metric::Correlation),
            other => Err(Error::invalid(format!("unknown metric {other:?}"))),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Euclidean => "euclidean",
            Metric::Correlation => "correlation",
        })
    }
}

/// Symmetric matrix of nonnegative dissimilarities with a zero diagonal. The
/// triangle inequality is not required.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

/// First cell of a row-major `n x n` matrix that breaks the distance
/// contract, as `(row, column, message)`.
pub(crate) fn invalid_cell(n: usize, data: &[f64]) -> Option<(usize, usize, String)> {
    for i in 0..n {
        let dii = data[i * n + i];
        if dii != 0.0 {
            return Some((i, i, format!("distance matrix diagonal at ({i}, {i}) is {dii}, expected 0")));
        }
        for j in (i + 1)..n {
            let (a, b) = (data[i * n + j], data[j * n + i]);
            if !(a.is_finite() && a >= 0.0) {
                return Some((
                    i,
                    j,
                    format!("distance matrix entry ({i}, {j}) = {a} is not a finite nonnegative number"),
                ));
            }
            if a != b {
                return Some((j, i, format!("distance matrix is not symmetric at ({i}, {j}): {a} vs {b}")));
            }
        }
    }
    None
}

impl DistanceMatrix {
    /// Validates a row-major square matrix. Errors name the offending cell.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                context: "distance matrix entries",
                expected: n * n,
                found: data.len(),
            });
        }
        if let Some((_, _, message)) = invalid_cell(n, &data) {
            return Err(Error::invalid(message));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                context: "distance matrix row length",
                expected: n,
                found: bad.len(),
            });
        }
        Self::new(n, rows.concat())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Off-diagonal distances `d[i][j]` for `i < j`, unsorted.
    pub fn pairwise(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n * self.n.saturating_sub(1) / 2);
        for i in 0..self.n {
            out.extend_from_slice(&self.row(i)[i + 1..]);
        }
        out
    }

    /// Distance matrix of the relabelled samples: new sample `perm[i]` is old sample `i`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[perm[i] * n + perm[j]] = self.get(i, j);
            }
        }
        Self { n, data }
    }
}

/// Distances between the rows of an `n × p` coordinate table.
pub fn compute_distances(points: &[Vec<f64>], metric: Metric) -> Result<DistanceMatrix> {
    let n = points.len();
    if n < 2 {
        return Err(Error::invalid("at least two samples are required"));
    }
    let p = points[0].len();
    if p == 0 {
        return Err(Error::invalid("coordinate rows are empty"));
    }
    if let Some(bad) = points.iter().find(|r| r.len() != p) {
        return Err(Error::DimensionMismatch {
            context: "coordinate row length",
            expected: p,
            found: bad.len(),
        });
    }

    let rows: Vec<Vec<f64>> = match metric {
        Metric::Euclidean => points.to_vec(),
        Metric::Correlation => points
            .iter()
            .enumerate()
            .map(|(i, r)| standardize(r).ok_or(Error::ZeroVarianceRow { row: i }))
            .collect::<Result<_>>()?,
    };

    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = match metric {
                Metric::Euclidean => rows[i]
                    .iter()
                    .zip(&rows[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt(),
                Metric::Correlation => {
                    let r: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
                    (1.0 - r.clamp(-1.0, 1.0)).max(0.0)
                }
            };
            data[i * n + j] = d;
            data[j * n + i] = d;
        }
    }
    Ok(DistanceMatrix { n, data })
}

/// Centres a row and scales it to unit Euclidean norm, so that dot products
/// of standardized rows are Pearson correlations.
fn standardize(row: &[f64]) -> Option<Vec<f64>> {
    let mean = row.iter().sum::<f64>() / row.len() as f64;
    let centered: Vec<f64> = row.iter().map(|x| x - mean).collect();
    let norm = centered.iter().map(|x| x * x).sum::<f64>().sqrt();
    let scale = row.iter().fold(0.0_f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    if norm <= 1e-12 * scale * (row.len() as f64).sqrt() {
        return None;
    }
    Some(centered.into_iter().map(|x| x / norm).collect())
}
