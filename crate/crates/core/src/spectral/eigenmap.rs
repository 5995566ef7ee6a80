use std::io::Write;

use super::eigen::{eigendecompose_with, Solver, Spectrum};
use super::laplacian::{assemble_laplacian, LaplacianParts};
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

/// Coordinates of every q-simplex in the first `m` eigenvectors of `L^(q)`.
#[derive(Debug, Clone)]
pub struct Eigenmap {
    pub q: usize,
    pub simplices: Vec<Simplex>,
    pub eigenvalues: Vec<f64>,
    /// One row per simplex, one column per eigenvector.
    pub coordinates: Vec<Vec<f64>>,
}

pub fn eigenmap(k: &SimplicialComplex, q: usize, m: usize) -> Result<Eigenmap> {
    eigenmap_with(k, q, m, Solver::Auto)
}

pub fn eigenmap_with(k: &SimplicialComplex, q: usize, m: usize, solver: Solver) -> Result<Eigenmap> {
    let n = k.count(q);
    if n == 0 {
        return Err(Error::NoSimplicesAtDimension { q });
    }
    if m == 0 || m > n {
        return Err(Error::invalid(format!(
            "eigenmap dimension {m} must be between 1 and the {n} simplices at q = {q}"
        )));
    }
    let l = assemble_laplacian(k, q, LaplacianParts::Both)?;
    let Spectrum {
        eigenvalues,
        eigenvectors,
        ..
    } = eigendecompose_with(&l, m, solver)?;
    let coordinates = (0..n)
        .map(|row| eigenvectors.iter().map(|y| y.values()[row]).collect())
        .collect();
    Ok(Eigenmap {
        q,
        simplices: k.simplices(q).to_vec(),
        eigenvalues,
        coordinates,
    })
}

impl Eigenmap {
    /// Tab-separated table: simplex label (vertices joined by `-`) then one
    /// column per coordinate.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "simplex")?;
        for i in 1..=self.eigenvalues.len() {
            write!(out, "\ty{i}")?;
        }
        writeln!(out)?;
        for (s, row) in self.simplices.iter().zip(&self.coordinates) {
            write!(out, "{}", s.label())?;
            for x in row {
                write!(out, "\t{x}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}
