//! Batch scoring, permutation significance, FDR control and scale selection.

mod fdr;
mod permutation;
mod report;
mod sweep;

pub use fdr::{bh_adjust, BhResult};
pub use permutation::{permutation_pvalues, score_features, FeatureScorer, PermutationConfig};
pub use report::{score_report, FeatureResult, ScoreReport};
pub use sweep::{sweep_epsilon, SweepConfig, SweepResult, SweepRow};
