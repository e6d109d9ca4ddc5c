use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::data::ModelData;
use crate::model::{Branch, Hyperparams, ItemParams};
use crate::stats::{log_prob_argmax, sample_given_argmax, RngStream};

/// Stream families. Each update draws from its own family, and within a
/// family from a per-unit substream positioned at the sweep number, so the
/// output never depends on scheduling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum StreamKind {
    Init = 1,
    Ystar = 2,
    Beta = 3,
    Item = 4,
    ZMove = 5,
    Rho = 6,
    Data = 7,
    Block = 8,
    Reflect = 9,
}

/// Per-sweep random number source.
#[derive(Clone, Copy, Debug)]
pub struct SweepRng {
    pub seed: u64,
    pub sweep: u64,
}

impl SweepRng {
    pub fn new(seed: u64, sweep: u64) -> Self {
        Self { seed, sweep }
    }

    pub fn stream(&self, kind: StreamKind, unit: usize) -> RngStream {
        RngStream::at(self.seed, ((kind as u64) << 56) | unit as u64, self.sweep)
    }
}

/// Full state of one chain.
#[derive(Clone, Debug)]
pub struct ChainState {
    /// Dense `n_leg x n_terms`, legislator-major; NaN outside each span.
    pub beta: Vec<f64>,
    pub items: Vec<ItemParams>,
    /// Latent triples aligned with `ModelData::by_item`.
    pub ystar: Vec<Vec<[f64; 3]>>,
    pub rho: f64,
}

impl ChainState {
    /// Ideal points from N(0, 1), branches uniform, items from their prior
    /// and latent triples drawn exactly from their conditional law.
    pub fn initialize(data: &ModelData, hyper: &Hyperparams, seed: u64, rho: f64) -> Self {
        let root = SweepRng::new(seed, 0);
        let mut beta = vec![f64::NAN; data.n_leg * data.n_terms];
        for (i, span) in data.spans.iter().enumerate() {
            // a draw from the AR(1) prior at the starting rho
            let mut rng = root.stream(StreamKind::Init, i);
            let mut prev: Option<(usize, f64)> = None;
            for &t in span {
                let e: f64 = rng.sample(StandardNormal);
                let b = match prev {
                    None => e,
                    Some((tp, bp)) => {
                        let a = rho.powi((t - tp) as i32);
                        a * bp + (1.0 - a * a).sqrt() * e
                    }
                };
                beta[data.beta_slot(i, t)] = b;
                prev = Some((t, b));
            }
        }
        let items = (0..data.n_item)
            .map(|j| {
                let mut rng = root.stream(StreamKind::Init, data.n_leg + j);
                let z = if rng.random::<bool>() { Branch::Pos } else { Branch::Neg };
                ItemParams::sample_prior(z, hyper, &mut rng)
            })
            .collect();
        let mut state = Self { beta, items, ystar: Vec::new(), rho };
        state.ystar = (0..data.n_item)
            .into_par_iter()
            .map(|j| {
                let mut rng = root.stream(StreamKind::Ystar, j);
                state.exact_ystar(data, j, &mut rng)
            })
            .collect();
        state
    }

    /// Ideal point relevant to item `j` for legislator `leg`.
    #[inline]
    pub fn beta_for(&self, data: &ModelData, leg: usize, j: usize) -> f64 {
        self.beta[data.beta_slot(leg, data.item_term[j])]
    }

    /// Independent exact draws of item `j`'s latent triples given the
    /// current parameters and votes.
    pub fn exact_ystar(&self, data: &ModelData, j: usize, rng: &mut RngStream) -> Vec<[f64; 3]> {
        let item = &self.items[j];
        data.by_item[j]
            .iter()
            .map(|o| exact_triple(&item.latent_means(self.beta_for(data, o.leg as usize, j)), o.yes, rng))
            .collect()
    }

    /// Whether every latent triple agrees with its vote.
    pub fn ystar_consistent(&self, data: &ModelData) -> bool {
        data.by_item
            .iter()
            .zip(&self.ystar)
            .all(|(obs, ys)| obs.iter().zip(ys).all(|(o, y)| triple_agrees(y, o.yes)))
    }
}

#[inline]
pub(crate) fn triple_agrees(y: &[f64; 3], yes: bool) -> bool {
    let other = y[0].max(y[2]);
    if yes {
        y[1] > other
    } else {
        y[1] < other
    }
}

/// Exact draw of a triple given its means and the vote it must reproduce.
pub(crate) fn exact_triple<R: Rng + ?Sized>(means: &[f64; 3], yes: bool, rng: &mut R) -> [f64; 3] {
    if yes {
        return sample_given_argmax(means, 1, rng);
    }
    let l0 = log_prob_argmax(means, 0);
    let l2 = log_prob_argmax(means, 2);
    let p0 = 1.0 / (1.0 + (l2 - l0).exp());
    let k = if rng.random::<f64>() < p0 { 0 } else { 2 };
    sample_given_argmax(means, k, rng)
}
