use crate::error::{PumError, Result};
use crate::model::{Vote, VoteMatrix};

/// One observed vote as seen from its item.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Obs {
    pub leg: u32,
    pub yes: bool,
}

/// Sparse, sampler-oriented view of a vote matrix.
///
/// Observed cells are grouped by item; `by_leg[i]` lists `(item, slot)`
/// pairs pointing back into `by_item[item][slot]`. Missing cells are absent.
#[derive(Clone, Debug)]
pub struct ModelData {
    pub n_leg: usize,
    pub n_item: usize,
    pub n_terms: usize,
    pub item_term: Vec<usize>,
    pub by_item: Vec<Vec<Obs>>,
    pub by_leg: Vec<Vec<(u32, u32)>>,
    /// Sorted terms in which each legislator has at least one observed vote.
    pub spans: Vec<Vec<usize>>,
}

impl ModelData {
    /// Static layout: a single term shared by every item.
    pub fn new_static(votes: &VoteMatrix) -> Result<Self> {
        Self::build(votes, vec![0; votes.n_cols()], 1)
    }

    /// Dynamic layout from the matrix's time index.
    pub fn new_dynamic(votes: &VoteMatrix) -> Result<Self> {
        let index = votes
            .term_index()
            .ok_or_else(|| PumError::InvalidData("dynamic model needs a time index".into()))?;
        let n_terms = index.n_terms();
        Self::build(votes, index.item_term, n_terms)
    }

    pub fn build(votes: &VoteMatrix, item_term: Vec<usize>, n_terms: usize) -> Result<Self> {
        let (n_leg, n_item) = (votes.n_rows(), votes.n_cols());
        if item_term.len() != n_item || item_term.iter().any(|&t| t >= n_terms) {
            return Err(PumError::DimensionMismatch("item terms do not match the vote matrix".into()));
        }
        let mut by_item = vec![Vec::new(); n_item];
        let mut by_leg = vec![Vec::new(); n_leg];
        for (j, cells) in by_item.iter_mut().enumerate() {
            for i in 0..n_leg {
                let yes = match votes.get(i, j) {
                    Vote::Yes => true,
                    Vote::No => false,
                    Vote::Missing => continue,
                };
                by_leg[i].push((j as u32, cells.len() as u32));
                cells.push(Obs { leg: i as u32, yes });
            }
        }
        if let Some(j) = by_item.iter().position(Vec::is_empty) {
            return Err(PumError::InvalidData(format!(
                "item {:?} has no observed votes",
                votes.col_labels()[j]
            )));
        }
        if let Some(i) = by_leg.iter().position(Vec::is_empty) {
            return Err(PumError::InvalidData(format!(
                "legislator {:?} has no observed votes",
                votes.row_labels()[i]
            )));
        }
        let spans = by_leg
            .iter()
            .map(|cells| {
                let mut s: Vec<usize> = cells.iter().map(|&(j, _)| item_term[j as usize]).collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        Ok(Self { n_leg, n_item, n_terms, item_term, by_item, by_leg, spans })
    }

    pub fn n_obs(&self) -> usize {
        self.by_item.iter().map(Vec::len).sum()
    }

    /// Flat index of `beta[i, t]` in the dense legislator-major layout.
    #[inline]
    pub fn beta_slot(&self, leg: usize, term: usize) -> usize {
        leg * self.n_terms + term
    }

    /// `(legislator, term)` for every ideal-point parameter, in storage order.
    pub fn beta_params(&self) -> Vec<(usize, usize)> {
        self.spans
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |&t| (i, t)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Vote::*;

    #[test]
    fn cross_indices_agree() {
        let m = VoteMatrix::from_rows(&[vec![Yes, Missing, No], vec![No, Yes, Yes]]).unwrap();
        let d = ModelData::new_static(&m).unwrap();
        assert_eq!(d.n_obs(), 5);
        for (i, cells) in d.by_leg.iter().enumerate() {
            for &(j, k) in cells {
                assert_eq!(d.by_item[j as usize][k as usize].leg as usize, i);
            }
        }
        assert_eq!(d.by_item[1], vec![Obs { leg: 1, yes: true }]);
    }

    #[test]
    fn empty_rows_and_columns_rejected() {
        let m = VoteMatrix::from_rows(&[vec![Yes, Missing], vec![No, Missing]]).unwrap();
        assert!(ModelData::new_static(&m).is_err());
        let m = VoteMatrix::from_rows(&[vec![Yes, No], vec![Missing, Missing]]).unwrap();
        assert!(ModelData::new_static(&m).is_err());
    }

    #[test]
    fn spans_follow_term_order() {
        let m = VoteMatrix::from_rows(&[vec![Yes, Missing, No], vec![Missing, Yes, Missing]])
            .unwrap()
            .with_time_index(vec!["10".into(), "9".into(), "11".into()])
            .unwrap();
        let d = ModelData::new_dynamic(&m).unwrap();
        assert_eq!(d.item_term, vec![1, 0, 2]);
        assert_eq!(d.spans, vec![vec![1, 2], vec![0]]);
        assert_eq!(d.beta_params(), vec![(0, 1), (0, 2), (1, 0)]);
    }
}
