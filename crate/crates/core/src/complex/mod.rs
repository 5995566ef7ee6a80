//! Ordered abstract simplicial complexes.
//!
//! A complex stores its simplices per dimension, each list sorted
//! lexicographically with strictly ascending vertex indices. Vertex order is
//! the input row order, and the orientation of every simplex follows the
//! parity of vertex positions. Complexes are immutable once built apart from
//! their weights, and can be shared freely across worker threads.

mod distance;
mod homology;
mod json;
mod rips;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use distance::{compute_distances, DistanceMatrix, Metric};
pub(crate) use distance::invalid_cell;
pub use homology::{betti_numbers, boundary_rank};
pub use json::ComplexDocument;
pub use rips::build_vietoris_rips;

/// Floor applied to coface-sum weights so every simplex keeps a strictly
/// positive weight.
pub const DEFAULT_WEIGHT_FLOOR: f64 = 1e-12;

/// A simplex given by its strictly ascending vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::invalid("a simplex needs at least one vertex"));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!(
                "simplex vertices must be strictly ascending, got {vertices:?}"
            )));
        }
        Ok(Self(vertices))
    }

    /// Sorts the vertices; rejects repeated vertices.
    pub fn from_unsorted(mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        Self::new(vertices)
    }

    pub(crate) fn from_sorted_unchecked(vertices: Vec<usize>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Self(vertices)
    }

    pub fn vertex(v: usize) -> Self {
        Self(vec![v])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Face obtained by dropping the vertex at position `k`.
    pub fn face(&self, k: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(k);
        Simplex(v)
    }

    /// Vertex ids joined by `-`, as used in tabular outputs.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        parts.join("-")
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.label().replace('-', ","))
    }
}

/// Signed faces of a simplex: the k-th face omits the k-th vertex and
/// carries sign `(-1)^k`. Vertices have an empty boundary.
pub fn boundary_faces(s: &Simplex) -> Vec<(Simplex, i8)> {
    if s.dim() == 0 {
        return Vec::new();
    }
    (0..s.0.len())
        .map(|k| (s.face(k), if k % 2 == 0 { 1 } else { -1 }))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum WeightScheme {
    /// Every simplex has weight one.
    Unit,
    /// Top-dimensional simplices get `top_weight`; every lower simplex gets the
    /// sum of the weights of its cofaces one dimension up, floored at `floor`.
    /// On a graph this gives each vertex its degree.
    CofaceSum { top_weight: f64, floor: f64 },
}

impl Default for WeightScheme {
    fn default() -> Self {
        WeightScheme::CofaceSum {
            top_weight: 1.0,
            floor: DEFAULT_WEIGHT_FLOOR,
        }
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightScheme::Unit => write!(f, "unit"),
            WeightScheme::CofaceSum { top_weight, floor } => {
                write!(f, "coface(top={top_weight},floor={floor:e})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    simplices: Vec<Vec<Simplex>>,
    weights: Option<Vec<Vec<f64>>>,
    epsilon: Option<f64>,
}

impl SimplicialComplex {
    /// Builds a complex from arbitrary simplices, checking closure. Vertex
    /// lists may be given in any order; `S_0` must be exactly `0..vertex_count`.
    pub fn from_simplices<I>(vertex_count: usize, simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let mut by_dim: Vec<Vec<Simplex>> = vec![Vec::new()];
        for raw in simplices {
            let s = Simplex::from_unsorted(raw.clone()).map_err(|_| {
                Error::MalformedDocument(format!("simplex {raw:?} is empty or repeats a vertex"))
            })?;
            if let Some(&v) = s.vertices().iter().find(|&&v| v >= vertex_count) {
                return Err(Error::MalformedDocument(format!(
                    "simplex {s} uses vertex {v} but vertex_count is {vertex_count}"
                )));
            }
            let q = s.dim();
            if by_dim.len() <= q {
                by_dim.resize(q + 1, Vec::new());
            }
            by_dim[q].push(s);
        }
        Self::from_sorted_lists(vertex_count, by_dim, None)
    }

    /// Canonicalises per-dimension lists and validates the complex.
    pub(crate) fn from_sorted_lists(
        vertex_count: usize,
        mut by_dim: Vec<Vec<Simplex>>,
        epsilon: Option<f64>,
    ) -> Result<Self> {
        for list in by_dim.iter_mut() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateSimplex(w[0].vertices().to_vec()));
            }
        }
        while by_dim.len() > 1 && by_dim.last().is_some_and(Vec::is_empty) {
            by_dim.pop();
        }
        if by_dim.is_empty() {
            by_dim.push(Vec::new());
        }
        let expected: Vec<Simplex> = (0..vertex_count).map(Simplex::vertex).collect();
        if by_dim[0] != expected {
            if let Some(missing) = expected.iter().find(|v| by_dim[0].binary_search(v).is_err()) {
                return Err(Error::MalformedDocument(format!(
                    "vertex {missing} is missing from the 0-simplices (vertex_count {vertex_count})"
                )));
            }
        }
        let complex = Self {
            vertex_count,
            simplices: by_dim,
            weights: None,
            epsilon,
        };
        complex.check_closure()?;
        Ok(complex)
    }

    /// Verifies that every boundary face of every stored simplex is stored.
    pub fn check_closure(&self) -> Result<()> {
        for q in 1..self.simplices.len() {
            for s in &self.simplices[q] {
                for (face, _) in boundary_faces(s) {
                    if self.simplices[q - 1].binary_search(&face).is_err() {
                        return Err(Error::NotClosedUnderInclusion {
                            simplex: s.vertices().to_vec(),
                            face: face.vertices().to_vec(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    /// Highest dimension with at least one simplex (0 for an empty complex).
    pub fn top_dim(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn simplices(&self, q: usize) -> &[Simplex] {
        self.simplices.get(q).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, q: usize) -> usize {
        self.simplices(q).len()
    }

    /// Simplex counts for dimensions `0..=top_dim`.
    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.simplices.get(s.dim())?.binary_search(s).ok()
    }

    /// For each q-simplex, the indices of its (q+1)-dimensional cofaces.
    pub fn cofaces(&self, q: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count(q)];
        for (j, s) in self.simplices(q + 1).iter().enumerate() {
            for (face, _) in boundary_faces(s) {
                let i = self.simplices[q]
                    .binary_search(&face)
                    .expect("complex is closed");
                out[i].push(j);
            }
        }
        out
    }

    pub fn has_weights(&self) -> bool {
        self.weights.is_some()
    }

    pub fn weights(&self, q: usize) -> Result<&[f64]> {
        let w = self.weights.as_ref().ok_or(Error::MissingWeights)?;
        Ok(w.get(q).map(Vec::as_slice).unwrap_or(&[]))
    }

    /// Replaces all weights. Arrays must parallel the simplex lists and be
    /// strictly positive.
    pub fn set_weights(&mut self, weights: Vec<Vec<f64>>) -> Result<()> {
        if weights.len() != self.simplices.len() {
            return Err(Error::DimensionMismatch {
                context: "weight dimensions",
                expected: self.simplices.len(),
                found: weights.len(),
            });
        }
        for (q, (w, s)) in weights.iter().zip(&self.simplices).enumerate() {
            if w.len() != s.len() {
                return Err(Error::DimensionMismatch {
                    context: "weights per simplex",
                    expected: s.len(),
                    found: w.len(),
                });
            }
            if let Some(bad) = w.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
                return Err(Error::invalid(format!(
                    "weight {bad} at dimension {q} is not strictly positive"
                )));
            }
        }
        self.weights = Some(weights);
        Ok(())
    }

    pub fn compute_weights(&mut self, scheme: WeightScheme) -> Result<()> {
        match scheme {
            WeightScheme::Unit => {
                let w = self.simplices.iter().map(|s| vec![1.0; s.len()]).collect();
                self.set_weights(w)
            }
            WeightScheme::CofaceSum { top_weight, floor } => {
                if !(top_weight > 0.0) || !(floor > 0.0) {
                    return Err(Error::invalid("coface-sum weights need top_weight > 0 and floor > 0"));
                }
                let top = self.top_dim();
                let mut w: Vec<Vec<f64>> = self.simplices.iter().map(|s| vec![0.0; s.len()]).collect();
                w[top].iter_mut().for_each(|x| *x = top_weight);
                self.propagate_into(&mut w, floor);
                self.set_weights(w)
            }
        }
    }

    /// Keeps the top-dimensional weights already present and recomputes all
    /// lower ones as floored coface sums. With edge weights `A_ij` on a graph
    /// this yields vertex weights `Σ_j A_ij`.
    pub fn propagate_coface_weights(&mut self, floor: f64) -> Result<()> {
        if !(floor > 0.0) {
            return Err(Error::invalid("weight floor must be positive"));
        }
        let current = self.weights.as_ref().ok_or(Error::MissingWeights)?;
        let top = self.top_dim();
        let mut w: Vec<Vec<f64>> = self.simplices.iter().map(|s| vec![0.0; s.len()]).collect();
        w[top].clone_from(&current[top]);
        self.propagate_into(&mut w, floor);
        self.set_weights(w)
    }

    fn propagate_into(&self, w: &mut [Vec<f64>], floor: f64) {
        for q in (0..self.top_dim()).rev() {
            let (lower, upper) = w.split_at_mut(q + 1);
            let lower = &mut lower[q];
            for (s, ws) in self.simplices[q + 1].iter().zip(&upper[0]) {
                for (face, _) in boundary_faces(s) {
                    let i = self.simplices[q]
                        .binary_search(&face)
                        .expect("complex is closed");
                    lower[i] += ws;
                }
            }
            lower.iter_mut().for_each(|x| *x = x.max(floor));
        }
    }

    pub fn with_weights(mut self, scheme: WeightScheme) -> Result<Self> {
        self.compute_weights(scheme)?;
        Ok(self)
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.vertex_count {
            return Err(Error::DimensionMismatch {
                context: "vertex permutation",
                expected: self.vertex_count,
                found: perm.len(),
            });
        }
        let all = self
            .simplices
            .iter()
            .flatten()
            .map(|s| s.vertices().iter().map(|&v| perm[v]).collect::<Vec<_>>());
        let mut out = Self::from_simplices(self.vertex_count, all)?;
        out.epsilon = self.epsilon;
        Ok(out)
    }

    /// Edges of the 1-skeleton as vertex pairs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.simplices(1).iter().map(|s| (s.0[0], s.0[1]))
    }
}
