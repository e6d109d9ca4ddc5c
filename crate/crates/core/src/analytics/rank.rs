use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use crate::error::{PumError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankSummary {
    pub labels: Vec<String>,
    pub quantiles: Vec<f64>,
    /// `ranks[i][k]`: quantile `k` of legislator `i`'s rank (1 = lowest beta).
    pub ranks: Vec<Vec<usize>>,
}

/// Rank every draw's ideal points (ascending, ties by row order) and report
/// lower empirical quantiles of each legislator's rank.
pub fn post_rank(beta_draws: ArrayView2<'_, f64>, labels: &[String], quantiles: &[f64]) -> Result<RankSummary> {
    let (s, n) = beta_draws.dim();
    if s == 0 || n == 0 {
        return Err(PumError::NotEnoughDraws("rank summary needs at least one draw".into()));
    }
    if labels.len() != n {
        return Err(PumError::DimensionMismatch("one label per legislator required".into()));
    }
    if let Some(q) = quantiles.iter().find(|q| !(**q > 0.0 && **q < 1.0)) {
        return Err(PumError::InvalidParameter(format!("quantiles must lie in (0, 1), got {q}")));
    }
    let mut by_leg = vec![Vec::with_capacity(s); n];
    let mut order: Vec<usize> = (0..n).collect();
    for row in beta_draws.rows() {
        order.sort_by(|&a, &b| row[a].total_cmp(&row[b]));
        for (r, &i) in order.iter().enumerate() {
            by_leg[i].push(r + 1);
        }
        order.sort_unstable();
    }
    let ranks = by_leg
        .into_iter()
        .map(|mut r| {
            r.sort_unstable();
            quantiles.iter().map(|&q| r[(q * (s - 1) as f64).floor() as usize]).collect()
        })
        .collect();
    Ok(RankSummary { labels: labels.to_vec(), quantiles: quantiles.to_vec(), ranks })
}
