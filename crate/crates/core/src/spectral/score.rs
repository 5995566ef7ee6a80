use super::cochain::{center_in_place, weighted_dot, Cochain};
use super::laplacian::LaplacianOperator;
use crate::error::{Error, Result};

/// Relative threshold below which a centred feature counts as constant.
pub const ZERO_VARIANCE_TOLERANCE: f64 = 1e-12;

/// Rayleigh quotient `⟨f̃, L f̃⟩_K / ⟨f̃, f̃⟩_K` of the centred cochain.
pub fn rayleigh_score(f: &Cochain, l: &LaplacianOperator) -> Result<f64> {
    l.check(f)?;
    let w = l.weights();
    let mut centered = f.values().to_vec();
    let scale = weighted_dot(w, &centered, &centered);
    center_in_place(w, &mut centered);
    let denom = weighted_dot(w, &centered, &centered);
    check_variance(denom, scale)?;
    let mut lf = vec![0.0; centered.len()];
    l.apply_into(&centered, &mut lf);
    Ok(weighted_dot(w, &centered, &lf) / denom)
}

/// Score of an already-centred cochain through the symmetric form, skipping
/// the explicit `L f̃`. Used on the hot permutation path.
pub(crate) fn centered_score(l: &LaplacianOperator, centered: &[f64], scale: f64) -> Result<f64> {
    let denom = weighted_dot(l.weights(), centered, centered);
    check_variance(denom, scale)?;
    Ok(l.energy(centered) / denom)
}

pub(crate) fn check_variance(denom: f64, scale: f64) -> Result<()> {
    if !(denom > ZERO_VARIANCE_TOLERANCE * scale.max(1.0)) {
        return Err(Error::ZeroVarianceFeature { variance: denom });
    }
    Ok(())
}
