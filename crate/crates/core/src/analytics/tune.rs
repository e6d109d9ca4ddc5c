use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{PumError, Result};
use crate::model::{theta_prob, Branch, Hyperparams, ItemParams};
use crate::stats::RngStream;

/// Prior-predictive Yes probabilities for `n_leg x n_issue` pairs, row-major
/// by legislator. Ideal points come from N(beta_mean, beta_var), branches
/// are uniform and items follow the branch-conditional prior.
pub fn tune_hyper(hyper: &Hyperparams, n_leg: usize, n_issue: usize, seed: u64) -> Result<Vec<f64>> {
    hyper.validate()?;
    if n_leg == 0 || n_issue == 0 {
        return Err(PumError::InvalidParameter("n_leg and n_issue must be positive".into()));
    }
    let mut rng = RngStream::new(seed, 0);
    let sd = hyper.beta_var.sqrt();
    let beta: Vec<f64> = (0..n_leg)
        .map(|_| hyper.beta_mean + sd * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let items: Vec<ItemParams> = (0..n_issue)
        .map(|_| {
            let z = if rng.random::<bool>() { Branch::Pos } else { Branch::Neg };
            ItemParams::sample_prior(z, hyper, &mut rng)
        })
        .collect();
    Ok(beta
        .par_iter()
        .flat_map_iter(|&b| items.iter().map(move |it| theta_prob(b, it)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_discrimination_limit() {
        let h = Hyperparams { alpha_scale: 1e-9, delta_mean: [0.0, 0.0], ..Default::default() };
        let th = tune_hyper(&h, 20, 30, 1).unwrap();
        assert_eq!(th.len(), 600);
        assert!(th.iter().all(|t| (t - 1.0 / 3.0).abs() < 1e-6));
    }

    #[test]
    fn deterministic_in_seed() {
        let h = Hyperparams::default();
        assert_eq!(tune_hyper(&h, 5, 5, 3).unwrap(), tune_hyper(&h, 5, 5, 3).unwrap());
        assert!(tune_hyper(&h, 0, 5, 3).is_err());
    }
}
