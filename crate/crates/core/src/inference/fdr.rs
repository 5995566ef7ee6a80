//! Benjamini-Hochberg step-up procedure.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BhResult {
    /// Adjusted p-values in input order.
    pub q_values: Vec<f64>,
    /// `q_value <= alpha`.
    pub rejected: Vec<bool>,
}

impl BhResult {
    pub fn n_rejected(&self) -> usize {
        self.rejected.iter().filter(|&&r| r).count()
    }
}

/// `q_(i) = min_{j >= i} min(1, m p_(j) / j)` over the ascending p-values,
/// rejecting every hypothesis with `q <= alpha`.
pub fn bh_adjust(p: &[f64], alpha: f64) -> Result<BhResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("FDR level must lie in (0, 1), got {alpha}")));
    }
    if let Some((index, &value)) = p.iter().enumerate().find(|(_, &x)| !(x > 0.0 && x <= 1.0)) {
        return Err(Error::InvalidPValue { index, value });
    }
    let m = p.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p[a].total_cmp(&p[b]).then(a.cmp(&b)));
    let mut q_values = vec![0.0; m];
    let mut running = 1.0_f64;
    for (rank, &i) in order.iter().enumerate().rev() {
        running = running.min(p[i] * m as f64 / (rank + 1) as f64);
        q_values[i] = running;
    }
    let rejected = q_values.iter().map(|&q| q <= alpha).collect();
    Ok(BhResult { q_values, rejected })
}
