use ndarray::{Array2, Array3};
use rayon::prelude::*;

use crate::error::{PumError, Result};
use crate::model::{theta_prob, VoteMatrix};
use crate::sampler::PosteriorSamples;

/// Default ceiling for materializing all predicted probabilities.
pub const DEFAULT_MEMORY_BUDGET: usize = 4 << 30;

/// Per-draw probabilities of a Yes vote for every cell.
///
/// Cells whose legislator has no ideal point in the item's term (dynamic
/// models, outside the service span) are NaN.
#[derive(Clone, Debug)]
pub enum PredictedProbs<'a> {
    /// `S x I x J` array.
    Materialized(Array3<f64>),
    /// Recomputed from the draws on demand.
    Streaming(StreamingProbs<'a>),
}

#[derive(Clone, Debug)]
pub struct StreamingProbs<'a> {
    samples: &'a PosteriorSamples,
    lookup: Vec<Option<usize>>,
}

impl StreamingProbs<'_> {
    fn draw(&self, s: usize) -> Array2<f64> {
        let lay = &self.samples.layout;
        let (ni, nj, nt) = (lay.n_leg(), lay.n_item(), lay.n_terms());
        let items: Vec<_> = (0..nj).map(|j| self.samples.item(s, j)).collect();
        let beta = self.samples.beta.row(s);
        Array2::from_shape_fn((ni, nj), |(i, j)| match self.lookup[i * nt + lay.item_term[j]] {
            Some(k) => theta_prob(beta[k], &items[j]),
            None => f64::NAN,
        })
    }
}

impl PredictedProbs<'_> {
    pub fn from_array(probs: Array3<f64>) -> Self {
        PredictedProbs::Materialized(probs)
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        match self {
            PredictedProbs::Materialized(a) => a.dim(),
            PredictedProbs::Streaming(s) => {
                let l = &s.samples.layout;
                (s.samples.n_draws(), l.n_leg(), l.n_item())
            }
        }
    }

    pub fn is_streaming(&self) -> bool {
        matches!(self, PredictedProbs::Streaming(_))
    }

    /// `I x J` probabilities of draw `s`.
    pub fn draw(&self, s: usize) -> Array2<f64> {
        match self {
            PredictedProbs::Materialized(a) => a.index_axis(ndarray::Axis(0), s).to_owned(),
            PredictedProbs::Streaming(st) => st.draw(s),
        }
    }

    /// Full array, computing it if needed.
    pub fn materialize(&self) -> Array3<f64> {
        match self {
            PredictedProbs::Materialized(a) => a.clone(),
            PredictedProbs::Streaming(_) => {
                let (s, i, j) = self.dims();
                let draws: Vec<Array2<f64>> = (0..s).into_par_iter().map(|d| self.draw(d)).collect();
                let mut out = Array3::zeros((s, i, j));
                for (d, m) in draws.into_iter().enumerate() {
                    out.index_axis_mut(ndarray::Axis(0), d).assign(&m);
                }
                out
            }
        }
    }
}

fn check_dims(votes: &VoteMatrix, samples: &PosteriorSamples) -> Result<()> {
    let l = &samples.layout;
    if votes.n_rows() != l.n_leg() || votes.n_cols() != l.n_item() {
        return Err(PumError::DimensionMismatch(format!(
            "votes are {} x {} but samples cover {} x {}",
            votes.n_rows(),
            votes.n_cols(),
            l.n_leg(),
            l.n_item()
        )));
    }
    if samples.n_draws() == 0 {
        return Err(PumError::NotEnoughDraws("no stored draws".into()));
    }
    Ok(())
}

/// Predicted probabilities with the default memory budget.
pub fn predict_probs<'a>(votes: &VoteMatrix, samples: &'a PosteriorSamples) -> Result<PredictedProbs<'a>> {
    predict_probs_with_budget(votes, samples, DEFAULT_MEMORY_BUDGET)
}

/// Materialize when `S * I * J` doubles fit in `budget` bytes, otherwise
/// return a streaming view.
pub fn predict_probs_with_budget<'a>(
    votes: &VoteMatrix,
    samples: &'a PosteriorSamples,
    budget: usize,
) -> Result<PredictedProbs<'a>> {
    check_dims(votes, samples)?;
    let streaming = PredictedProbs::Streaming(StreamingProbs { samples, lookup: samples.layout.beta_lookup() });
    let (s, i, j) = streaming.dims();
    let bytes = s.saturating_mul(i).saturating_mul(j).saturating_mul(8);
    if bytes <= budget {
        Ok(PredictedProbs::Materialized(streaming.materialize()))
    } else {
        Ok(streaming)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Branch, ItemParams, Vote};
    use crate::analytics::testutil::one_cell_samples;

    #[test]
    fn symmetric_item_at_origin() {
        let it = ItemParams::new([1.0, -1.0], [0.0, 0.0], Branch::Pos);
        let s = one_cell_samples(&[0.0], &[it]);
        let v = VoteMatrix::from_rows(&[vec![Vote::Yes]]).unwrap();
        let p = predict_probs(&v, &s).unwrap();
        assert!((p.draw(0)[[0, 0]] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn reflected_draws_predict_identically() {
        let it = ItemParams::new([1.3, -0.4], [0.2, 1.1], Branch::Pos);
        let s = one_cell_samples(&[0.7, -0.7], &[it, it.reflect()]);
        let v = VoteMatrix::from_rows(&[vec![Vote::Yes]]).unwrap();
        let a = predict_probs(&v, &s).unwrap().materialize();
        assert_eq!(a[[0, 0, 0]], a[[1, 0, 0]]);
    }

    #[test]
    fn budget_selects_streaming() {
        let it = ItemParams::new([1.0, -1.0], [0.0, 0.0], Branch::Pos);
        let s = one_cell_samples(&[0.1, 0.2], &[it, it]);
        let v = VoteMatrix::from_rows(&[vec![Vote::Yes]]).unwrap();
        let p = predict_probs_with_budget(&v, &s, 8).unwrap();
        assert!(p.is_streaming());
        let q = predict_probs_with_budget(&v, &s, 16).unwrap();
        assert!(!q.is_streaming());
        assert_eq!(p.materialize(), q.materialize());
        let wrong = VoteMatrix::from_rows(&[vec![Vote::Yes, Vote::No]]).unwrap();
        assert!(predict_probs(&wrong, &s).is_err());
    }
}
