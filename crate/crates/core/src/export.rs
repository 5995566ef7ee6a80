//! Edge-list views of the 1-skeleton for external plotting tools.

use std::io::Write;

use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
}

impl std::str::FromStr for ExportFormat {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(ExportFormat::Dot),
            "json" => Ok(ExportFormat::Json),
            other => Err(crate::error::Error::invalid(format!(
                "unknown export format {other:?} (expected dot or json)"
            ))),
        }
    }
}

#[derive(Serialize)]
struct EdgeList {
    vertex_count: usize,
    epsilon: Option<f64>,
    vertex_weights: Option<Vec<f64>>,
    edges: Vec<Edge>,
}

#[derive(Serialize)]
struct Edge {
    source: usize,
    target: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight: Option<f64>,
}

/// Undirected graph in Graphviz DOT. Edge weights become `weight` attributes
/// when the complex carries weights.
pub fn write_dot<W: Write>(k: &SimplicialComplex, mut out: W) -> std::io::Result<()> {
    let weights = k.weights(1).ok();
    writeln!(out, "graph complex {{")?;
    for v in 0..k.vertex_count() {
        writeln!(out, "  {v};")?;
    }
    for (e, (i, j)) in k.edges().enumerate() {
        match weights {
            Some(w) => writeln!(out, "  {i} -- {j} [weight={}];", w[e])?,
            None => writeln!(out, "  {i} -- {j};")?,
        }
    }
    writeln!(out, "}}")
}

pub fn write_edge_json<W: Write>(k: &SimplicialComplex, out: W) -> Result<()> {
    let weights = k.weights(1).ok();
    let doc = EdgeList {
        vertex_count: k.vertex_count(),
        epsilon: k.epsilon(),
        vertex_weights: k.weights(0).ok().map(<[f64]>::to_vec),
        edges: k
            .edges()
            .enumerate()
            .map(|(e, (source, target))| Edge {
                source,
                target,
                weight: weights.map(|w| w[e]),
            })
            .collect(),
    };
    serde_json::to_writer(out, &doc)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::WeightScheme;

    fn path3() -> SimplicialComplex {
        SimplicialComplex::from_simplices(3, vec![vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2]]).unwrap()
    }

    #[test]
    fn dot_lists_every_edge() {
        let mut buf = Vec::new();
        write_dot(&path3(), &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("graph complex {"));
        assert!(s.contains("  0 -- 1;"));
        assert!(s.contains("  1 -- 2;"));
        assert_eq!(s.matches("--").count(), 2);
    }

    #[test]
    fn json_carries_weights() {
        let k = path3().with_weights(WeightScheme::default()).unwrap();
        let mut buf = Vec::new();
        write_edge_json(&k, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["edges"].as_array().unwrap().len(), 2);
        assert_eq!(v["vertex_weights"], serde_json::json!([1.0, 2.0, 1.0]));
    }
}
