//! JSON interchange for complexes built elsewhere (Mapper, UMAP graphs, ...).
//!
//! ```json
//! {"vertex_count": 3, "epsilon": null,
//!  "simplices": {"0": [[0],[1],[2]], "1": [[0,1]]},
//!  "weights": {"0": [1, 1, 1e-12], "1": [1]}}
//! ```
//!
//! Weights are optional and, when present, must be given for every
//! dimension in parallel with the simplex arrays.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::SimplicialComplex;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub vertex_count: usize,
    #[serde(default)]
    pub epsilon: Option<f64>,
    pub simplices: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, Vec<f64>>>,
}

fn parse_dim(key: &str) -> Result<usize> {
    key.parse()
        .map_err(|_| Error::MalformedDocument(format!("dimension key {key:?} is not an integer")))
}

impl SimplicialComplex {
    pub fn from_document(doc: ComplexDocument) -> Result<Self> {
        let mut lists: Vec<(usize, Vec<Vec<usize>>)> = Vec::new();
        for (key, list) in doc.simplices {
            let q = parse_dim(&key)?;
            if let Some(bad) = list.iter().find(|s| s.len() != q + 1) {
                return Err(Error::MalformedDocument(format!(
                    "simplex {bad:?} listed under dimension {q}"
                )));
            }
            lists.push((q, list));
        }
        lists.sort_by_key(|(q, _)| *q);

        // Remember each simplex's weight before canonical re-sorting.
        let mut weighted: Option<Vec<(Vec<usize>, f64)>> = None;
        if let Some(weights) = doc.weights {
            let mut by_dim: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
            for (key, w) in weights {
                by_dim.insert(parse_dim(&key)?, w);
            }
            let dims: Vec<usize> = lists.iter().filter(|(_, l)| !l.is_empty()).map(|(q, _)| *q).collect();
            let wdims: Vec<usize> = by_dim.iter().filter(|(_, w)| !w.is_empty()).map(|(q, _)| *q).collect();
            if dims != wdims {
                return Err(Error::MalformedDocument(format!(
                    "weights given for dimensions {wdims:?} but simplices for {dims:?}"
                )));
            }
            let mut pairs = Vec::new();
            for (q, list) in &lists {
                let w = by_dim.get(q).map(Vec::as_slice).unwrap_or(&[]);
                if w.len() != list.len() {
                    return Err(Error::MalformedDocument(format!(
                        "dimension {q} has {} simplices but {} weights",
                        list.len(),
                        w.len()
                    )));
                }
                for (s, &x) in list.iter().zip(w) {
                    let mut v = s.clone();
                    v.sort_unstable();
                    pairs.push((v, x));
                }
            }
            weighted = Some(pairs);
        }

        let mut complex = SimplicialComplex::from_simplices(
            doc.vertex_count,
            lists.into_iter().flat_map(|(_, l)| l),
        )?;
        complex.epsilon = doc.epsilon;

        if let Some(pairs) = weighted {
            let mut w: Vec<Vec<f64>> = complex.simplices.iter().map(|s| vec![0.0; s.len()]).collect();
            for (v, x) in pairs {
                let q = v.len() - 1;
                let i = complex.simplices[q]
                    .binary_search(&super::Simplex::from_sorted_unchecked(v))
                    .expect("simplex was just inserted");
                w[q][i] = x;
            }
            complex
                .set_weights(w)
                .map_err(|e| Error::MalformedDocument(e.to_string()))?;
        }
        Ok(complex)
    }

    pub fn to_document(&self) -> ComplexDocument {
        let simplices = self
            .simplices
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(|(q, l)| (q.to_string(), l.iter().map(|s| s.vertices().to_vec()).collect()))
            .collect();
        let weights = self.weights.as_ref().map(|w| {
            w.iter()
                .enumerate()
                .filter(|(_, l)| !l.is_empty())
                .map(|(q, l)| (q.to_string(), l.clone()))
                .collect()
        });
        ComplexDocument {
            vertex_count: self.vertex_count,
            epsilon: self.epsilon,
            simplices,
            weights,
        }
    }

    /// Parses and validates a complex JSON document.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: ComplexDocument =
            serde_json::from_str(s).map_err(|e| Error::MalformedDocument(e.to_string()))?;
        Self::from_document(doc)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("complex documents always serialize")
    }
}
