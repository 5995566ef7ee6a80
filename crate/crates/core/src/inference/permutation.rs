//! Feature scoring against a fixed complex and permutation p-values.
//!
//! The complex and its Laplacian stay fixed; each permutation relabels the
//! samples of one feature before induction. Every feature owns a ChaCha
//! stream derived from `(seed, feature index)`, so results do not depend on
//! how features are spread over worker threads.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::features::{Aggregation, FeatureSet, Inducer};
use crate::spectral::{assemble_laplacian, center_in_place, centered_score, LaplacianOperator, LaplacianParts};

/// Relative slack under which a permuted score counts as a tie with the
/// observed one.
const TIE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermutationConfig {
    pub n_permutations: usize,
    pub seed: u64,
    /// FDR level.
    pub alpha: f64,
}

impl Default for PermutationConfig {
    fn default() -> Self {
        Self {
            n_permutations: 1000,
            seed: 0,
            alpha: 0.05,
        }
    }
}

impl PermutationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_permutations == 0 {
            return Err(Error::invalid("at least one permutation is required"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::invalid(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        Ok(())
    }
}

/// A Laplacian assembled once for scoring many features on one complex.
pub struct FeatureScorer<'a> {
    complex: &'a SimplicialComplex,
    laplacian: LaplacianOperator,
    q: usize,
    agg: Aggregation,
}

impl<'a> FeatureScorer<'a> {
    pub fn new(k: &'a SimplicialComplex, q: usize, agg: Aggregation) -> Result<Self> {
        let laplacian = assemble_laplacian(k, q, LaplacianParts::Both)?;
        Ok(Self {
            complex: k,
            laplacian,
            q,
            agg,
        })
    }

    pub fn laplacian(&self) -> &LaplacianOperator {
        &self.laplacian
    }

    fn inducer<'f>(&'f self, fs: &'f FeatureSet, r: usize) -> Result<Inducer<'f>> {
        let inducer = fs.inducer(r, self.complex, self.q, self.agg)?;
        if inducer.q() != self.q {
            return Err(Error::invalid(format!(
                "features induce {}-forms but the scorer works at q = {}",
                inducer.q(),
                self.q
            )));
        }
        Ok(inducer)
    }

    fn score_with(&self, inducer: &Inducer, perm: &[usize], buf: &mut [f64], scratch: &mut Vec<usize>) -> Result<f64> {
        inducer.induce_permuted(perm, buf, scratch)?;
        let w = self.laplacian.weights();
        let scale: f64 = w.iter().zip(buf.iter()).map(|(w, x)| w * x * x).sum();
        center_in_place(w, buf);
        centered_score(&self.laplacian, buf, scale)
    }

    pub fn score(&self, fs: &FeatureSet, r: usize) -> Result<f64> {
        let inducer = self.inducer(fs, r)?;
        let identity: Vec<usize> = (0..self.complex.vertex_count()).collect();
        let mut buf = vec![0.0; inducer.len()];
        self.score_with(&inducer, &identity, &mut buf, &mut Vec::new())
    }

    /// Observed score and add-one permutation p-value
    /// `(1 + #{R_perm <= R_obs}) / (1 + n)` for feature `r`.
    pub fn permutation_test(&self, fs: &FeatureSet, r: usize, cfg: &PermutationConfig) -> Result<(f64, f64)> {
        let inducer = self.inducer(fs, r)?;
        let n = self.complex.vertex_count();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut buf = vec![0.0; inducer.len()];
        let mut scratch = Vec::new();
        let observed = self.score_with(&inducer, &perm, &mut buf, &mut scratch)?;
        let cutoff = observed + TIE_TOLERANCE * observed.abs().max(1.0);

        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(r as u64);
        let mut at_most = 0usize;
        for _ in 0..cfg.n_permutations {
            perm.shuffle(&mut rng);
            match self.score_with(&inducer, &perm, &mut buf, &mut scratch) {
                Ok(s) if s > cutoff => {}
                Ok(_) => at_most += 1,
                // an undefined permuted score counts against significance
                Err(Error::ZeroVarianceFeature { .. }) => at_most += 1,
                Err(e) => return Err(e),
            }
        }
        let p = (1 + at_most) as f64 / (1 + cfg.n_permutations) as f64;
        Ok((observed, p))
    }
}

/// One score per feature; per-feature failures (constant features, bad
/// sample counts) are returned in place without aborting the batch.
pub fn score_features(
    k: &SimplicialComplex,
    fs: &FeatureSet,
    q: usize,
    agg: Aggregation,
) -> Result<Vec<Result<f64>>> {
    let q = fs.cochain_dim(q)?;
    let scorer = FeatureScorer::new(k, q, agg)?;
    Ok((0..fs.len())
        .into_par_iter()
        .map(|r| scorer.score(fs, r))
        .collect())
}

/// Observed scores and permutation p-values for every feature, evaluated in
/// parallel on the current rayon pool.
pub fn permutation_pvalues(
    k: &SimplicialComplex,
    fs: &FeatureSet,
    q: usize,
    cfg: &PermutationConfig,
    agg: Aggregation,
) -> Result<Vec<Result<(f64, f64)>>> {
    cfg.validate()?;
    let q = fs.cochain_dim(q)?;
    let scorer = FeatureScorer::new(k, q, agg)?;
    Ok((0..fs.len())
        .into_par_iter()
        .map(|r| scorer.permutation_test(fs, r, cfg))
        .collect())
}
