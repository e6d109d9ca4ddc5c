//! Ground-truth data generators.

use rand::Rng;
use rand_distr::StandardNormal;

use super::item::ItemParams;
use super::votes::{Vote, VoteMatrix};
use crate::error::{PumError, Result};

/// Ideal points and item positions from which votes are simulated.
///
/// `beta[i]` is legislator i's path over terms (length 1 for static data);
/// `item_term[j]` picks the term of item j.
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticTruth {
    pub beta: Vec<Vec<f64>>,
    pub psi: Vec<[f64; 3]>,
    pub item_term: Vec<usize>,
}

impl SyntheticTruth {
    pub fn new_static(beta: Vec<f64>, psi: Vec<[f64; 3]>) -> Result<Self> {
        let j = psi.len();
        Self::new(beta.into_iter().map(|b| vec![b]).collect(), psi, vec![0; j])
    }

    pub fn new(beta: Vec<Vec<f64>>, psi: Vec<[f64; 3]>, item_term: Vec<usize>) -> Result<Self> {
        if item_term.len() != psi.len() {
            return Err(PumError::DimensionMismatch("item_term length differs from psi".into()));
        }
        let n_terms = beta.first().map_or(0, Vec::len);
        if beta.is_empty() || psi.is_empty() || beta.iter().any(|p| p.len() != n_terms) {
            return Err(PumError::DimensionMismatch("beta paths must be non-empty and equal length".into()));
        }
        if item_term.iter().any(|&t| t >= n_terms) {
            return Err(PumError::DimensionMismatch("item term beyond beta path length".into()));
        }
        for (j, p) in psi.iter().enumerate() {
            let ordered = (p[0] < p[1] && p[1] < p[2]) || (p[2] < p[1] && p[1] < p[0]);
            if !ordered {
                return Err(PumError::InvalidParameter(format!(
                    "item {j}: psi_2 must lie strictly between psi_1 and psi_3, got {p:?}"
                )));
            }
        }
        Ok(Self { beta, psi, item_term })
    }

    pub fn items(&self) -> Vec<ItemParams> {
        self.psi
            .iter()
            .map(|&p| ItemParams::from_psi(p).expect("validated ordering"))
            .collect()
    }
}

/// One vote from the three-option random-utility model.
pub fn simulate_utility_vote<R: Rng + ?Sized>(beta: f64, psi: &[f64; 3], rng: &mut R) -> Vote {
    let u: [f64; 3] = std::array::from_fn(|k| {
        let d = beta - psi[k];
        -d * d + rng.sample::<f64, _>(StandardNormal)
    });
    if u[1] > u[0] && u[1] > u[2] {
        Vote::Yes
    } else {
        Vote::No
    }
}

/// Simulate a full matrix by utility maximization with standard Gaussian
/// shocks. Yes iff the middle option has the strictly largest utility.
pub fn simulate_votes<R: Rng + ?Sized>(truth: &SyntheticTruth, rng: &mut R) -> VoteMatrix {
    let (n, j) = (truth.beta.len(), truth.psi.len());
    let mut outcomes = Vec::with_capacity(n * j);
    for path in &truth.beta {
        for (psi, &t) in truth.psi.iter().zip(&truth.item_term) {
            outcomes.push(simulate_utility_vote(path[t], psi, rng));
        }
    }
    labelled(outcomes, n, j, &truth.item_term)
}

/// Simulate votes from general `(alpha, delta)` items through the latent
/// utility representation `y* = (-alpha_1 (beta - delta_1), 0, -alpha_2 (beta - delta_2)) + e`.
pub fn simulate_from_params<R: Rng + ?Sized>(
    beta: &[Vec<f64>],
    items: &[ItemParams],
    item_term: &[usize],
    rng: &mut R,
) -> VoteMatrix {
    let (n, j) = (beta.len(), items.len());
    let mut outcomes = Vec::with_capacity(n * j);
    for path in beta {
        for (item, &t) in items.iter().zip(item_term) {
            let m = item.latent_means(path[t]);
            let y: [f64; 3] = std::array::from_fn(|k| m[k] + rng.sample::<f64, _>(StandardNormal));
            outcomes.push(if y[1] > y[0] && y[1] > y[2] { Vote::Yes } else { Vote::No });
        }
    }
    labelled(outcomes, n, j, item_term)
}

fn labelled(outcomes: Vec<Vote>, n: usize, j: usize, item_term: &[usize]) -> VoteMatrix {
    let rows = (1..=n).map(|i| format!("leg{i}")).collect();
    let cols = (1..=j).map(|c| format!("item{c}")).collect();
    let m = VoteMatrix::new(outcomes, rows, cols).expect("generated labels are unique");
    if item_term.iter().any(|&t| t > 0) {
        m.with_time_index(item_term.iter().map(|t| t.to_string()).collect())
            .expect("length matches")
    } else {
        m
    }
}
