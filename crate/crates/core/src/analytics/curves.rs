use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{PumError, Result};
use crate::model::theta_prob;
use crate::sampler::PosteriorSamples;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub beta: f64,
    pub mean: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Linear-interpolation quantile of sorted data.
pub(crate) fn quantile_sorted(x: &[f64], q: f64) -> f64 {
    let h = q * (x.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(x.len() - 1);
    x[lo] + (h - lo as f64) * (x[hi] - x[lo])
}

/// Posterior mean response curve of one item on an even grid, with an
/// equal-tailed band at `ci_level`.
pub fn item_char(
    samples: &PosteriorSamples,
    item: usize,
    beta_range: (f64, f64),
    grid_size: usize,
    ci_level: f64,
) -> Result<Vec<CurvePoint>> {
    let (lo, hi) = beta_range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(PumError::InvalidInterval { lower: lo, upper: hi });
    }
    if !(ci_level > 0.0 && ci_level < 1.0) {
        return Err(PumError::InvalidParameter(format!("ci_level must lie in (0, 1), got {ci_level}")));
    }
    if grid_size < 2 {
        return Err(PumError::InvalidParameter("grid_size must be at least 2".into()));
    }
    if item >= samples.layout.n_item() {
        return Err(PumError::InvalidParameter(format!("item index {item} out of range")));
    }
    let s = samples.n_draws();
    if s == 0 {
        return Err(PumError::NotEnoughDraws("no stored draws".into()));
    }
    let items: Vec<_> = (0..s).map(|d| samples.item(d, item)).collect();
    let tail = (1.0 - ci_level) / 2.0;
    Ok((0..grid_size)
        .into_par_iter()
        .map(|g| {
            let beta = lo + (hi - lo) * g as f64 / (grid_size - 1) as f64;
            let mut th: Vec<f64> = items.iter().map(|it| theta_prob(beta, it)).collect();
            let mean = th.iter().sum::<f64>() / s as f64;
            th.sort_by(f64::total_cmp);
            CurvePoint { beta, mean, lower: quantile_sorted(&th, tail), upper: quantile_sorted(&th, 1.0 - tail) }
        })
        .collect())
}
