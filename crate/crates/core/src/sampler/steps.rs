//! Single-sweep updates shared by the static and dynamic samplers.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::data::{ModelData, Obs};
use super::state::{exact_triple, triple_agrees, ChainState, StreamKind, SweepRng};
use crate::model::{log_beta_prior_static, log_vote_prob, Hyperparams, ItemParams, Vote};
use crate::stats::{draw_trunc_normal, RngStream};

const INF: f64 = f64::INFINITY;

/// One systematic-scan update of a triple given its vote. The middle
/// coordinate is redrawn first, then the outer two.
pub fn update_triple<R: Rng + ?Sized>(y: &mut [f64; 3], means: &[f64; 3], yes: bool, rng: &mut R) {
    if yes {
        y[1] = draw_trunc_normal(means[1], 1.0, y[0].max(y[2]), INF, rng);
        y[0] = draw_trunc_normal(means[0], 1.0, -INF, y[1], rng);
        y[2] = draw_trunc_normal(means[2], 1.0, -INF, y[1], rng);
    } else {
        y[1] = draw_trunc_normal(means[1], 1.0, -INF, y[0].max(y[2]), rng);
        y[0] = if y[2] > y[1] {
            means[0] + rng.sample::<f64, _>(StandardNormal)
        } else {
            draw_trunc_normal(means[0], 1.0, y[1], INF, rng)
        };
        y[2] = if y[0] > y[1] {
            means[2] + rng.sample::<f64, _>(StandardNormal)
        } else {
            draw_trunc_normal(means[2], 1.0, y[1], INF, rng)
        };
    }
    if !triple_agrees(y, yes) {
        // only reachable through exact float ties
        *y = exact_triple(means, yes, rng);
    }
}

/// Gibbs scan over every observed latent triple.
pub fn gibbs_ystar(data: &ModelData, state: &mut ChainState, sweep: SweepRng) {
    let beta = &state.beta;
    let items = &state.items;
    state.ystar.par_iter_mut().enumerate().for_each(|(j, ys)| {
        let mut rng = sweep.stream(StreamKind::Ystar, j);
        let item = &items[j];
        let t = data.item_term[j];
        for (y, o) in ys.iter_mut().zip(&data.by_item[j]) {
            let b = beta[data.beta_slot(o.leg as usize, t)];
            update_triple(y, &item.latent_means(b), o.yes, &mut rng);
        }
    });
}

/// Likelihood information `(precision, linear term)` about each span term of
/// legislator `leg`: rows 1 and 3 of every observed triple regress on beta
/// with unit noise.
pub fn beta_information(data: &ModelData, state: &ChainState, leg: usize) -> Vec<(f64, f64)> {
    let span = &data.spans[leg];
    let mut info = vec![(0.0, 0.0); span.len()];
    for &(j, k) in &data.by_leg[leg] {
        let (j, k) = (j as usize, k as usize);
        let it = &state.items[j];
        let y = &state.ystar[j][k];
        let pos = if span.len() == 1 {
            0
        } else {
            span.binary_search(&data.item_term[j]).expect("term in span")
        };
        let [a0, a1] = it.alpha;
        let [d0, d1] = it.delta;
        info[pos].0 += a0 * a0 + a1 * a1;
        info[pos].1 += -a0 * (y[0] - a0 * d0) - a1 * (y[2] - a1 * d1);
    }
    info
}

/// Conjugate update of static ideal points under the N(beta_mean, beta_var) prior.
pub fn gibbs_beta(data: &ModelData, state: &mut ChainState, hyper: &Hyperparams, sweep: SweepRng) {
    let draws: Vec<f64> = (0..data.n_leg)
        .into_par_iter()
        .map(|i| {
            let (prec, lin) = beta_information(data, state, i)[0];
            let mut rng = sweep.stream(StreamKind::Beta, i);
            let var = 1.0 / (1.0 / hyper.beta_var + prec);
            let mean = var * (hyper.beta_mean / hyper.beta_var + lin);
            mean + var.sqrt() * rng.sample::<f64, _>(StandardNormal)
        })
        .collect();
    for (i, b) in draws.into_iter().enumerate() {
        state.beta[data.beta_slot(i, data.spans[i][0])] = b;
    }
}

/// One branch update for item parameters: `alpha | delta` (truncated normal),
/// then `delta | alpha` (normal). `c` selects the branch, `y` the matching
/// latent row, and `betas` the voters' ideal points.
fn update_branch(
    item: &mut ItemParams,
    c: usize,
    y: impl Iterator<Item = f64> + Clone,
    betas: &[f64],
    hyper: &Hyperparams,
    rng: &mut RngStream,
) {
    let s = item.z.sign();
    let (lo, hi) = item.z.alpha_support(c);
    let w2 = hyper.alpha_scale * hyper.alpha_scale;
    let k2 = hyper.delta_scale * hyper.delta_scale;

    let delta = item.delta[c];
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (yv, &b) in y.clone().zip(betas) {
        let x = delta - b;
        sxx += x * x;
        sxy += x * yv;
    }
    let prec = 1.0 / w2 + sxx;
    let mean = (s * hyper.alpha_mean[c] / w2 + sxy) / prec;
    let alpha = draw_trunc_normal(mean, prec.sqrt().recip(), lo, hi, rng);

    let sr: f64 = y.zip(betas).map(|(yv, &b)| yv + alpha * b).sum();
    let prec = 1.0 / k2 + betas.len() as f64 * alpha * alpha;
    let mean = (s * hyper.delta_mean[c] / k2 + alpha * sr) / prec;
    item.alpha[c] = alpha;
    item.delta[c] = mean + prec.sqrt().recip() * rng.sample::<f64, _>(StandardNormal);
}

/// Conditional updates of `(alpha_j, delta_j)` with `z_j` held fixed.
pub fn gibbs_item(data: &ModelData, state: &mut ChainState, hyper: &Hyperparams, sweep: SweepRng) {
    let beta = &state.beta;
    let ystar = &state.ystar;
    state.items.par_iter_mut().enumerate().for_each(|(j, item)| {
        let mut rng = sweep.stream(StreamKind::Item, j);
        let t = data.item_term[j];
        let betas: Vec<f64> = data.by_item[j]
            .iter()
            .map(|o| beta[data.beta_slot(o.leg as usize, t)])
            .collect();
        let ys = &ystar[j];
        update_branch(item, 0, ys.iter().map(|y| y[0]), &betas, hyper, &mut rng);
        update_branch(item, 1, ys.iter().map(|y| y[2]), &betas, hyper, &mut rng);
    });
}

/// Accepted/attempted counts of the two branch moves.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MoveCounts {
    pub flip_attempted: u64,
    pub flip_accepted: u64,
    pub redraw_attempted: u64,
    pub redraw_accepted: u64,
}

impl MoveCounts {
    fn merge(self, o: Self) -> Self {
        Self {
            flip_attempted: self.flip_attempted + o.flip_attempted,
            flip_accepted: self.flip_accepted + o.flip_accepted,
            redraw_attempted: self.redraw_attempted + o.redraw_attempted,
            redraw_accepted: self.redraw_accepted + o.redraw_accepted,
        }
    }
}

/// Log-likelihood of an item's observed votes with the latent triples
/// integrated out.
pub fn collapsed_loglik(item: &ItemParams, obs: &[Obs], betas: impl Iterator<Item = f64>) -> f64 {
    obs.iter()
        .zip(betas)
        .map(|(o, b)| log_vote_prob(b, item, if o.yes { Vote::Yes } else { Vote::No }))
        .sum()
}

/// Branch-switching Metropolis-Hastings moves. With probability `flip_rate`
/// the item is reflected, otherwise it is redrawn from the prior of the
/// opposite branch; either way only the collapsed likelihood ratio remains.
/// Accepted items get their latent triples redrawn from the exact conditional.
pub fn mh_z_moves(
    data: &ModelData,
    state: &mut ChainState,
    hyper: &Hyperparams,
    flip_rate: f64,
    sweep: SweepRng,
) -> MoveCounts {
    let beta = &state.beta;
    state
        .items
        .par_iter_mut()
        .zip(state.ystar.par_iter_mut())
        .enumerate()
        .map(|(j, (item, ys))| {
            let mut rng = sweep.stream(StreamKind::ZMove, j);
            let t = data.item_term[j];
            let obs = &data.by_item[j];
            let betas: Vec<f64> = obs.iter().map(|o| beta[data.beta_slot(o.leg as usize, t)]).collect();
            let flip = rng.random::<f64>() < flip_rate;
            let proposal = if flip {
                item.reflect()
            } else {
                ItemParams::sample_prior(item.z.flip(), hyper, &mut rng)
            };
            let log_ratio = collapsed_loglik(&proposal, obs, betas.iter().copied())
                - collapsed_loglik(item, obs, betas.iter().copied());
            let accept = log_ratio >= 0.0 || rng.random::<f64>().ln() < log_ratio;
            if accept {
                *item = proposal;
                for ((y, o), &b) in ys.iter_mut().zip(obs).zip(&betas) {
                    *y = exact_triple(&item.latent_means(b), o.yes, &mut rng);
                }
            }
            let mut c = MoveCounts::default();
            if flip {
                c.flip_attempted = 1;
                c.flip_accepted = accept as u64;
            } else {
                c.redraw_attempted = 1;
                c.redraw_accepted = accept as u64;
            }
            c
        })
        .reduce(MoveCounts::default, MoveCounts::merge)
}

/// Metropolis moves that reflect each legislator's ideal points through
/// zero (the whole path in dynamic fits), with the latent triples
/// integrated out; accepted rows get their triples redrawn exactly.
///
/// In unfolding data the extremes on both sides can vote alike, so a
/// legislator may sit in the mirror image of its mode. Gibbs updates of
/// beta given y* cannot cross the valley between the two. Returns
/// `(accepted, attempted)`.
pub fn mh_leg_reflections(data: &ModelData, state: &mut ChainState, hyper: &Hyperparams, dynamic: bool, sweep: SweepRng) -> (u64, u64) {
    let mut accepted = 0;
    for i in 0..data.n_leg {
        let mut rng = sweep.stream(StreamKind::Reflect, i);
        let mut log_ratio = 0.0;
        for &(j, k) in &data.by_leg[i] {
            let (j, k) = (j as usize, k as usize);
            let b = state.beta[data.beta_slot(i, data.item_term[j])];
            let v = if data.by_item[j][k].yes { Vote::Yes } else { Vote::No };
            let item = &state.items[j];
            log_ratio += log_vote_prob(-b, item, v) - log_vote_prob(b, item, v);
        }
        if !dynamic {
            // the AR(1) path prior is symmetric; the static prior may not be
            let b = state.beta[data.beta_slot(i, 0)];
            log_ratio += log_beta_prior_static(-b, hyper) - log_beta_prior_static(b, hyper);
        }
        if log_ratio >= 0.0 || rng.random::<f64>().ln() < log_ratio {
            accepted += 1;
            for &t in &data.spans[i] {
                let slot = data.beta_slot(i, t);
                state.beta[slot] = -state.beta[slot];
            }
            for &(j, k) in &data.by_leg[i] {
                let (j, k) = (j as usize, k as usize);
                let b = state.beta[data.beta_slot(i, data.item_term[j])];
                state.ystar[j][k] = exact_triple(&state.items[j].latent_means(b), data.by_item[j][k].yes, &mut rng);
            }
        }
    }
    (accepted, data.n_leg as u64)
}
