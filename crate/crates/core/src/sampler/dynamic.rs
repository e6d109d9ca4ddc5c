//! Time-varying ideal points: forward-filter backward-sample paths and the
//! shared autoregressive coefficient.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::data::ModelData;
use super::state::{ChainState, StreamKind, SweepRng};
use super::steps::beta_information;
use crate::error::{PumError, Result};
use crate::model::{log_ar1_transition_gap, log_item_prior, Hyperparams, ItemParams};
use crate::stats::{trunc_normal_logpdf, RngStream};

/// Exact joint draw of one path given per-term observation information.
///
/// `terms` are span positions in the global term order; consecutive entries
/// `g` apart are linked by `N(rho^g b, 1 - rho^(2g))`. The first term has the
/// stationary N(0, 1) law.
pub fn ffbs_path<R: Rng + ?Sized>(terms: &[usize], info: &[(f64, f64)], rho: f64, rng: &mut R) -> Vec<f64> {
    let n = terms.len();
    let mut mf = vec![0.0; n];
    let mut vf = vec![0.0; n];
    let (mut m_pred, mut v_pred) = (0.0, 1.0);
    for k in 0..n {
        if k > 0 {
            let a = rho.powi((terms[k] - terms[k - 1]) as i32);
            m_pred = a * mf[k - 1];
            v_pred = a * a * vf[k - 1] + 1.0 - a * a;
        }
        let (prec, lin) = info[k];
        vf[k] = 1.0 / (1.0 / v_pred + prec);
        mf[k] = vf[k] * (m_pred / v_pred + lin);
    }
    let mut path = vec![0.0; n];
    path[n - 1] = mf[n - 1] + vf[n - 1].sqrt() * rng.sample::<f64, _>(StandardNormal);
    for k in (0..n - 1).rev() {
        let a = rho.powi((terms[k + 1] - terms[k]) as i32);
        let q = 1.0 - a * a;
        let v = 1.0 / (1.0 / vf[k] + a * a / q);
        let m = v * (mf[k] / vf[k] + a * path[k + 1] / q);
        path[k] = m + v.sqrt() * rng.sample::<f64, _>(StandardNormal);
    }
    path
}

/// FFBS update of every legislator's path.
pub fn ffbs_beta(data: &ModelData, state: &mut ChainState, sweep: SweepRng) {
    let rho = state.rho;
    let paths: Vec<Vec<f64>> = (0..data.n_leg)
        .into_par_iter()
        .map(|i| {
            let info = beta_information(data, state, i);
            let mut rng = sweep.stream(StreamKind::Beta, i);
            ffbs_path(&data.spans[i], &info, rho, &mut rng)
        })
        .collect();
    for (i, path) in paths.into_iter().enumerate() {
        for (&t, b) in data.spans[i].iter().zip(path) {
            state.beta[data.beta_slot(i, t)] = b;
        }
    }
}

/// Log target of rho: truncated-normal prior plus every gap-adjusted
/// transition along the spans.
pub fn log_rho_target(data: &ModelData, beta: &[f64], rho: f64, hyper: &Hyperparams) -> f64 {
    let prior = trunc_normal_logpdf(rho, hyper.rho_mean, hyper.rho_sigma, 0.0, 1.0).unwrap_or(f64::NEG_INFINITY);
    if !prior.is_finite() {
        return prior;
    }
    let mut lp = prior;
    for (i, span) in data.spans.iter().enumerate() {
        for w in span.windows(2) {
            let prev = beta[data.beta_slot(i, w[0])];
            let cur = beta[data.beta_slot(i, w[1])];
            lp += crate::model::log_ar1_transition_gap(cur, prev, rho, w[1] - w[0]);
        }
    }
    lp
}

/// Random-walk Metropolis step for rho. Returns whether it was accepted.
pub fn mh_rho(data: &ModelData, state: &mut ChainState, hyper: &Hyperparams, sd_prop: f64, rng: &mut RngStream) -> bool {
    let prop = state.rho + sd_prop * rng.sample::<f64, _>(StandardNormal);
    if !(prop > 0.0 && prop < 1.0) {
        return false;
    }
    let log_ratio = log_rho_target(data, &state.beta, prop, hyper) - log_rho_target(data, &state.beta, state.rho, hyper);
    if log_ratio >= 0.0 || rng.random::<f64>().ln() < log_ratio {
        state.rho = prop;
        true
    } else {
        false
    }
}

/// Random-walk step sizes of the term-block moves: shift, and log scale.
const BLOCK_SHIFT_SD: f64 = 0.2;
const BLOCK_LOG_SCALE_SD: f64 = 0.1;

/// Path-prior terms a block move on terms `a..=b` can change, with ideal
/// points read by slot through `beta`.
fn block_log_prior(data: &ModelData, state: &ChainState, (a, b): (usize, usize), beta: impl Fn(usize) -> f64) -> f64 {
    let inside = |t: usize| (a..=b).contains(&t);
    let mut lp = 0.0;
    for (i, span) in data.spans.iter().enumerate() {
        if span.iter().all(|&t| !inside(t)) {
            continue;
        }
        if inside(span[0]) {
            let x = beta(data.beta_slot(i, span[0]));
            lp -= 0.5 * x * x;
        }
        for w in span.windows(2).filter(|w| inside(w[0]) || inside(w[1])) {
            let prev = beta(data.beta_slot(i, w[0]));
            let cur = beta(data.beta_slot(i, w[1]));
            lp += log_ar1_transition_gap(cur, prev, state.rho, w[1] - w[0]);
        }
    }
    lp
}

/// Metropolis moves along the per-term affine symmetry. A block of
/// consecutive terms is mapped by `beta -> s beta + c` and its items by
/// `alpha -> alpha / s`, `delta -> s delta + c`, `z -> sign(s) z`, which
/// leaves every latent mean, and so the likelihood and y*, unchanged. Half
/// the proposals shift (`s = 1`), half rescale with a random sign (`c = 0`,
/// `s = +-exp(u)`); both are symmetric, so the ratio holds the priors and the
/// Jacobian `|s|^(ideal points in block)`.
///
/// Each term's location, scale and orientation are tied to its neighbours
/// only through the AR(1) prior, and the Gibbs steps move along that orbit
/// slowly; without these moves a chain can drift into states where a stretch
/// of terms is shifted, shrunk or reflected against the rest. Returns
/// `(accepted, attempted)`.
pub fn mh_term_blocks(data: &ModelData, state: &mut ChainState, hyper: &Hyperparams, n_prop: usize, rng: &mut RngStream) -> (u64, u64) {
    let nt = data.n_terms;
    let mut accepted = 0;
    for _ in 0..n_prop {
        let a = rng.random_range(0..nt);
        let b = rng.random_range(a..nt);
        let (scale, shift) = if rng.random::<bool>() {
            (1.0, BLOCK_SHIFT_SD * rng.sample::<f64, _>(StandardNormal))
        } else {
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            (sign * (BLOCK_LOG_SCALE_SD * rng.sample::<f64, _>(StandardNormal)).exp(), 0.0)
        };
        let inside = |t: usize| (a..=b).contains(&t);
        let slots: Vec<usize> = data
            .spans
            .iter()
            .enumerate()
            .flat_map(|(i, span)| span.iter().filter(|&&t| inside(t)).map(move |&t| data.beta_slot(i, t)))
            .collect();
        let new = |k: usize| if inside(k % nt) { scale * state.beta[k] + shift } else { state.beta[k] };
        let mut log_ratio = block_log_prior(data, state, (a, b), new)
            - block_log_prior(data, state, (a, b), |k| state.beta[k])
            + slots.len() as f64 * scale.abs().ln();
        let mut proposals = Vec::new();
        for (j, (item, &t)) in state.items.iter().zip(&data.item_term).enumerate() {
            if inside(t) {
                let z = if scale < 0.0 { item.z.flip() } else { item.z };
                let p = ItemParams::new(
                    [item.alpha[0] / scale, item.alpha[1] / scale],
                    [scale * item.delta[0] + shift, scale * item.delta[1] + shift],
                    z,
                );
                log_ratio += log_item_prior(&p, hyper) - log_item_prior(item, hyper);
                proposals.push((j, p));
            }
        }
        if log_ratio >= 0.0 || rng.random::<f64>().ln() < log_ratio {
            accepted += 1;
            for k in slots {
                state.beta[k] = scale * state.beta[k] + shift;
            }
            for (j, p) in proposals {
                state.items[j] = p;
            }
        }
    }
    (accepted, n_prop as u64)
}

/// Reference legislators that fix the sign of the latent scale in the
/// dynamic model. Each entry pairs a legislator with the term positions
/// (global, 0-based) whose mean ideal point carries the sign; an empty list
/// means the whole span.
#[derive(Clone, Debug, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SignRefs {
    pub pos: Vec<(usize, Vec<usize>)>,
    pub neg: Vec<(usize, Vec<usize>)>,
}

impl SignRefs {
    pub fn positive(leg: usize) -> Self {
        Self { pos: vec![(leg, Vec::new())], neg: Vec::new() }
    }

    /// Check indices against the data and fill empty term lists with spans.
    pub fn resolve(&self, data: &ModelData) -> Result<Self> {
        let fix = |refs: &[(usize, Vec<usize>)]| -> Result<Vec<(usize, Vec<usize>)>> {
            refs.iter()
                .map(|(leg, terms)| {
                    let span = data.spans.get(*leg).ok_or_else(|| {
                        PumError::UnknownLegislator(format!("reference index {leg} out of range"))
                    })?;
                    if terms.is_empty() {
                        return Ok((*leg, span.clone()));
                    }
                    if let Some(t) = terms.iter().find(|t| span.binary_search(t).is_err()) {
                        return Err(PumError::InvalidParameter(format!(
                            "reference legislator {leg}: term {t} is outside its span"
                        )));
                    }
                    Ok((*leg, terms.clone()))
                })
                .collect()
        };
        Ok(Self { pos: fix(&self.pos)?, neg: fix(&self.neg)? })
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }
}

/// Mean of `beta` over the given terms of one legislator.
pub(crate) fn ref_mean(data: &ModelData, beta: &[f64], leg: usize, terms: &[usize]) -> f64 {
    terms.iter().map(|&t| beta[data.beta_slot(leg, t)]).sum::<f64>() / terms.len() as f64
}
