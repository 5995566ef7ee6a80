use std::io::Write;

use super::permutation::PermutationConfig;
use super::report::score_report;
use crate::complex::{build_vietoris_rips, DistanceMatrix, WeightScheme};
use crate::error::{Error, Result};
use crate::features::{Aggregation, FeatureSet};

#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Ascending scales to try.
    pub grid: Vec<f64>,
    pub max_dim: usize,
    pub q: usize,
    pub scheme: WeightScheme,
    pub aggregation: Aggregation,
    pub permutations: PermutationConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub epsilon: f64,
    pub n_edges: usize,
    pub n_rejected: usize,
    /// Set when this scale failed and was counted as zero rejections.
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Smallest scale attaining the largest rejection count.
    pub best_epsilon: f64,
}

impl SweepResult {
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "epsilon\tn_edges\tn_rejected")?;
        for r in &self.rows {
            writeln!(out, "{}\t{}\t{}", r.epsilon, r.n_edges, r.n_rejected)?;
        }
        Ok(())
    }
}

/// For each scale: build the Vietoris-Rips complex, run the permutation test
/// and count BH rejections. Failures at one scale are recorded, not raised.
pub fn sweep_epsilon(dist: &DistanceMatrix, fs: &FeatureSet, cfg: &SweepConfig) -> Result<SweepResult> {
    if cfg.grid.is_empty() {
        return Err(Error::invalid("the epsilon grid is empty"));
    }
    if cfg.grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("the epsilon grid must be strictly ascending"));
    }
    cfg.permutations.validate()?;

    let mut rows = Vec::with_capacity(cfg.grid.len());
    for &epsilon in &cfg.grid {
        let attempt = build_vietoris_rips(dist, epsilon, cfg.max_dim).and_then(|mut k| {
            k.compute_weights(cfg.scheme)?;
            let report = score_report(
                &k,
                fs,
                cfg.q,
                cfg.aggregation,
                Some(&cfg.permutations),
                &cfg.scheme.to_string(),
            )?;
            Ok((k.count(1), report.n_rejected()))
        });
        let row = match attempt {
            Ok((n_edges, n_rejected)) => SweepRow {
                epsilon,
                n_edges,
                n_rejected,
                diagnostic: None,
            },
            Err(e) => SweepRow {
                epsilon,
                n_edges: build_vietoris_rips(dist, epsilon, 1).map_or(0, |k| k.count(1)),
                n_rejected: 0,
                diagnostic: Some(e.to_string()),
            },
        };
        rows.push(row);
    }

    let mut best = 0;
    for (i, r) in rows.iter().enumerate() {
        if r.n_rejected > rows[best].n_rejected {
            best = i;
        }
    }
    let best_epsilon = rows[best].epsilon;
    Ok(SweepResult { rows, best_epsilon })
}
