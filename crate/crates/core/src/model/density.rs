use std::f64::consts::FRAC_1_SQRT_2;

use super::item::ItemParams;
use super::params::Hyperparams;
use super::votes::Vote;
use crate::stats::{bvn_cdf_half, log_prob_argmax, log_std_normal_pdf, trunc_normal_logpdf};

/// Probability of a Yes vote: the orthant probability of the two utility
/// differences, whose standardized limits are `alpha_c (beta - delta_c) / sqrt 2`
/// with correlation 1/2.
pub fn theta_prob(beta: f64, item: &ItemParams) -> f64 {
    bvn_cdf_half(
        item.alpha[0] * (beta - item.delta[0]) * FRAC_1_SQRT_2,
        item.alpha[1] * (beta - item.delta[1]) * FRAC_1_SQRT_2,
    )
}

/// Log-likelihood of one vote, accurate when the vote is very unlikely.
pub fn log_vote_prob(beta: f64, item: &ItemParams, vote: Vote) -> f64 {
    match vote {
        Vote::Missing => 0.0,
        Vote::Yes => {
            let p = theta_prob(beta, item);
            if p > 1e-280 {
                p.ln()
            } else {
                log_prob_argmax(&item.latent_means(beta), 1)
            }
        }
        Vote::No => {
            let p = theta_prob(beta, item);
            if p <= 0.5 {
                (-p).ln_1p()
            } else {
                // 1 - p by summing the two ways of voting No
                let m = item.latent_means(beta);
                let (l1, l3) = (log_prob_argmax(&m, 0), log_prob_argmax(&m, 2));
                let hi = l1.max(l3);
                hi + ((l1 - hi).exp() + (l3 - hi).exp()).ln()
            }
        }
    }
}

/// Log-density of `(alpha, delta)` under the prior conditional on `item.z`;
/// `-inf` when alpha is outside the branch's quadrant.
pub fn log_item_prior(item: &ItemParams, hyper: &Hyperparams) -> f64 {
    if !item.is_valid() {
        return f64::NEG_INFINITY;
    }
    let s = item.z.sign();
    let mut lp = 0.0;
    for c in 0..2 {
        let (lo, hi) = item.z.alpha_support(c);
        lp += trunc_normal_logpdf(item.alpha[c], s * hyper.alpha_mean[c], hyper.alpha_scale, lo, hi)
            .expect("prior scales validated");
        let u = (item.delta[c] - s * hyper.delta_mean[c]) / hyper.delta_scale;
        lp += log_std_normal_pdf(u) - hyper.delta_scale.ln();
    }
    lp
}

/// `N(beta_mean, beta_var)` log-density.
pub fn log_beta_prior_static(beta: f64, hyper: &Hyperparams) -> f64 {
    let sd = hyper.beta_var.sqrt();
    log_std_normal_pdf((beta - hyper.beta_mean) / sd) - sd.ln()
}

/// AR(1) transition `N(rho * beta_prev, 1 - rho^2)`.
pub fn log_ar1_transition(beta_t: f64, beta_prev: f64, rho: f64) -> f64 {
    log_ar1_transition_gap(beta_t, beta_prev, rho, 1)
}

/// Transition across `gap` steps: `N(rho^gap * beta_prev, 1 - rho^(2 gap))`.
pub fn log_ar1_transition_gap(beta_t: f64, beta_prev: f64, rho: f64, gap: usize) -> f64 {
    let decay = rho.powi(gap as i32);
    let var = 1.0 - decay * decay;
    let sd = var.sqrt();
    log_std_normal_pdf((beta_t - decay * beta_prev) / sd) - sd.ln()
}
