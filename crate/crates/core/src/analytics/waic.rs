use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::predict::PredictedProbs;
use crate::error::{PumError, Result};
use crate::model::{TermIndex, Vote, VoteMatrix};

/// Smallest probability entering a logarithm; keeps saturated predictions
/// (theta rounding to exactly 0 or 1) finite.
pub const PROB_FLOOR: f64 = f64::MIN_POSITIVE;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaicPart {
    pub waic: f64,
    pub lppd: f64,
    pub p_waic: f64,
    pub n_blocks: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermWaic {
    pub term: String,
    #[serde(flatten)]
    pub part: WaicPart,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaicReport {
    #[serde(flatten)]
    pub total: WaicPart,
    /// Present when blocks are legislator-within-term.
    pub per_term: Option<Vec<TermWaic>>,
}

struct Block {
    leg: usize,
    term: usize,
    cells: Vec<(usize, bool)>,
}

fn blocks(votes: &VoteMatrix, item_term: &[usize], n_terms: usize) -> Vec<Block> {
    let mut out = Vec::new();
    for i in 0..votes.n_rows() {
        let mut by_term: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n_terms];
        for (j, v) in votes.row(i).iter().enumerate() {
            if v.is_observed() {
                by_term[item_term[j]].push((j, *v == Vote::Yes));
            }
        }
        out.extend(
            by_term
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_empty())
                .map(|(term, cells)| Block { leg: i, term, cells }),
        );
    }
    out
}

fn log_sum_exp(x: &[f64]) -> f64 {
    let m = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + x.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

fn sample_variance(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0)
}

/// Blocked WAIC. Blocks are legislators, or legislator-within-term when
/// `time_index` is given; each block contributes
/// `log mean_s exp(l_s) - var_s(l_s)` where `l_s` is the block's log-likelihood
/// under draw `s` (variance with `S - 1`). Missing cells are skipped.
pub fn calc_waic(votes: &VoteMatrix, probs: &PredictedProbs<'_>, time_index: Option<&[String]>) -> Result<WaicReport> {
    let (s, ni, nj) = probs.dims();
    if (ni, nj) != (votes.n_rows(), votes.n_cols()) {
        return Err(PumError::DimensionMismatch(format!(
            "votes are {} x {} but predictions cover {ni} x {nj}",
            votes.n_rows(),
            votes.n_cols()
        )));
    }
    if s < 2 {
        return Err(PumError::NotEnoughDraws(format!("WAIC needs at least 2 draws, got {s}")));
    }
    let terms = match time_index {
        Some(ti) if ti.len() != nj => {
            return Err(PumError::DimensionMismatch("time index length differs from item count".into()));
        }
        Some(ti) => Some(TermIndex::from_labels(ti)),
        None => None,
    };
    let (item_term, n_terms) = match &terms {
        Some(t) => (t.item_term.clone(), t.n_terms()),
        None => (vec![0; nj], 1),
    };
    let blocks = blocks(votes, &item_term, n_terms);

    // draws x blocks
    let ll: Vec<Vec<f64>> = (0..s)
        .into_par_iter()
        .map(|d| {
            let p = probs.draw(d);
            blocks
                .iter()
                .map(|b| {
                    b.cells
                        .iter()
                        .map(|&(j, yes)| {
                            let t = p[[b.leg, j]];
                            let q = if yes { t } else { 1.0 - t };
                            q.max(PROB_FLOOR).ln()
                        })
                        .sum::<f64>()
                })
                .collect()
        })
        .collect();
    if ll.iter().flatten().any(|v| v.is_nan()) {
        return Err(PumError::InvalidData("prediction undefined for an observed cell".into()));
    }

    let contrib: Vec<(f64, f64)> = (0..blocks.len())
        .into_par_iter()
        .map(|b| {
            let col: Vec<f64> = ll.iter().map(|row| row[b]).collect();
            (log_sum_exp(&col) - (s as f64).ln(), sample_variance(&col))
        })
        .collect();

    let mut parts = vec![(0.0, 0.0, 0usize); n_terms];
    for (b, &(lppd, pen)) in blocks.iter().zip(&contrib) {
        let e = &mut parts[b.term];
        e.0 += lppd;
        e.1 += pen;
        e.2 += 1;
    }
    let part = |lppd: f64, p: f64, n: usize| WaicPart { waic: -2.0 * (lppd - p), lppd, p_waic: p, n_blocks: n };
    let (l, p, n) = parts.iter().fold((0.0, 0.0, 0), |a, e| (a.0 + e.0, a.1 + e.1, a.2 + e.2));
    let per_term = terms.map(|t| {
        t.terms
            .into_iter()
            .zip(&parts)
            .map(|(term, &(l, p, n))| TermWaic { term, part: part(l, p, n) })
            .collect()
    });
    Ok(WaicReport { total: part(l, p, n), per_term })
}
