use std::io::Write;

use super::fdr::bh_adjust;
use super::permutation::{permutation_pvalues, score_features, PermutationConfig};
use crate::complex::SimplicialComplex;
use crate::error::Result;
use crate::features::{Aggregation, FeatureSet};

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureResult {
    pub name: String,
    pub q: usize,
    pub score: Option<f64>,
    pub p_value: Option<f64>,
    pub q_value: Option<f64>,
    pub rejected: bool,
    /// Why the feature has no score or p-value.
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub q: usize,
    pub epsilon: Option<f64>,
    /// Zero when only scores were computed.
    pub n_permutations: usize,
    pub seed: u64,
    pub alpha: f64,
    pub weights: String,
    pub aggregation: Aggregation,
    pub features: Vec<FeatureResult>,
}

impl ScoreReport {
    pub fn n_rejected(&self) -> usize {
        self.features.iter().filter(|f| f.rejected).count()
    }

    /// Tab-separated report: `#` metadata lines, then the columns
    /// `feature q score p_value q_value rejected`. Missing values are `NA`.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let eps = self.epsilon.map_or("NA".to_string(), |e| e.to_string());
        writeln!(out, "# epsilon={eps}\tweights={}\taggregation={}", self.weights, self.aggregation)?;
        writeln!(
            out,
            "# n_permutations={}\tseed={}\talpha={}",
            self.n_permutations, self.seed, self.alpha
        )?;
        writeln!(out, "feature\tq\tscore\tp_value\tq_value\trejected")?;
        let fmt = |x: Option<f64>| x.map_or("NA".to_string(), |v| v.to_string());
        for f in &self.features {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                f.name,
                f.q,
                fmt(f.score),
                fmt(f.p_value),
                fmt(f.q_value),
                f.rejected
            )?;
        }
        Ok(())
    }
}

/// Scores every feature, estimates permutation p-values and applies BH.
/// With `cfg = None` only scores are reported. Structural problems (no
/// simplices at `q`, missing weights) are errors; per-feature problems are
/// recorded in the feature's `note`.
pub fn score_report(
    k: &SimplicialComplex,
    fs: &FeatureSet,
    q: usize,
    agg: Aggregation,
    cfg: Option<&PermutationConfig>,
    weights_label: &str,
) -> Result<ScoreReport> {
    let q = fs.cochain_dim(q)?;
    let (scores, pvalues): (Vec<Option<f64>>, Vec<Option<f64>>);
    let mut notes: Vec<Option<String>> = vec![None; fs.len()];
    match cfg {
        Some(cfg) => {
            let results = permutation_pvalues(k, fs, q, cfg, agg)?;
            (scores, pvalues) = results
                .into_iter()
                .zip(notes.iter_mut())
                .map(|(r, note)| match r {
                    Ok((s, p)) => (Some(s), Some(p)),
                    Err(e) => {
                        *note = Some(e.to_string());
                        (None, None)
                    }
                })
                .unzip();
        }
        None => {
            let results = score_features(k, fs, q, agg)?;
            scores = results
                .into_iter()
                .zip(notes.iter_mut())
                .map(|(r, note)| match r {
                    Ok(s) => Some(s),
                    Err(e) => {
                        *note = Some(e.to_string());
                        None
                    }
                })
                .collect();
            pvalues = vec![None; fs.len()];
        }
    }

    let alpha = cfg.map_or(PermutationConfig::default().alpha, |c| c.alpha);
    let tested: Vec<usize> = (0..fs.len()).filter(|&i| pvalues[i].is_some()).collect();
    let present: Vec<f64> = tested.iter().map(|&i| pvalues[i].unwrap()).collect();
    let bh = bh_adjust(&present, alpha)?;
    let mut q_values = vec![None; fs.len()];
    let mut rejected = vec![false; fs.len()];
    for (slot, &i) in tested.iter().enumerate() {
        q_values[i] = Some(bh.q_values[slot]);
        rejected[i] = bh.rejected[slot];
    }

    let features = (0..fs.len())
        .map(|i| FeatureResult {
            name: fs.names()[i].clone(),
            q,
            score: scores[i],
            p_value: pvalues[i],
            q_value: q_values[i],
            rejected: rejected[i],
            note: notes[i].take(),
        })
        .collect();
    Ok(ScoreReport {
        q,
        epsilon: k.epsilon(),
        n_permutations: cfg.map_or(0, |c| c.n_permutations),
        seed: cfg.map_or(0, |c| c.seed),
        alpha,
        weights: weights_label.to_string(),
        aggregation: agg,
        features,
    })
}
