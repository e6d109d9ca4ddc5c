//! Posterior summaries: predicted probabilities, WAIC, rank distributions,
//! response curves and prior-predictive draws.

mod curves;
mod predict;
mod rank;
mod tune;
mod waic;

#[cfg(test)]
mod testutil;

pub use curves::{item_char, CurvePoint};
pub use predict::{predict_probs, predict_probs_with_budget, PredictedProbs, StreamingProbs, DEFAULT_MEMORY_BUDGET};
pub use rank::{post_rank, RankSummary};
pub use tune::tune_hyper;
pub use waic::{calc_waic, TermWaic, WaicPart, WaicReport, PROB_FLOOR};
