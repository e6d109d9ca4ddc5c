//! Successive-conditional check of the dynamic sampler: alternating sweeps
//! with fresh votes drawn from the current state should leave the joint
//! prior invariant, so averages of a few functionals must match their
//! prior expectations.

use pum::model::{ControlParams, Hyperparams, Vote, VoteMatrix};
use pum::sampler::{Chain, FitOptions, Identification, ModelData};

fn batch_se(x: &[f64]) -> f64 {
    let nb = 50;
    let b = x.len() / nb;
    let means: Vec<f64> = (0..nb).map(|k| x[k * b..(k + 1) * b].iter().sum::<f64>() / b as f64).collect();
    let m = means.iter().sum::<f64>() / nb as f64;
    (means.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (nb as f64 - 1.0) / nb as f64).sqrt()
}

#[test]
fn dynamic_sampler_preserves_joint_prior() {
    let n = 60_000;
    let hyper = Hyperparams {
        alpha_scale: 1.5,
        delta_mean: [-1.0, 1.0],
        delta_scale: 1.5,
        rho_mean: 0.5,
        rho_sigma: 0.3,
        ..Default::default()
    };
    // 3 legislators, 4 terms with a gap in the labels, 2 items per term;
    // the third legislator starts in the second term
    use Vote::*;
    let row = vec![Yes, No, Yes, No, Yes, No, Yes, No];
    let mut late = row.clone();
    late[0] = Missing;
    late[1] = Missing;
    let votes = VoteMatrix::from_rows(&[row.clone(), row, late])
        .unwrap()
        .with_time_index(["1", "1", "2", "2", "4", "4", "5", "5"].iter().map(|s| s.to_string()).collect())
        .unwrap();
    let data = ModelData::new_dynamic(&votes).unwrap();
    let control = ControlParams { num_iter: n + 10, burn_in: 0, keep_iter: 1, seed: 3, sd_prop_rho: 0.3, ..Default::default() };
    let mut chain = Chain::new(data, hyper.clone(), control, true, Identification::None, FitOptions::default()).unwrap();

    let mut stats: Vec<Vec<f64>> = vec![Vec::with_capacity(n); 7];
    for c in 0..n {
        chain.sweep();
        chain.resimulate_votes(c as u64);
        let (s, d) = (chain.state(), chain.data());
        let b = |i: usize, t: usize| s.beta[d.beta_slot(i, t)];
        let it = s.items[0];
        stats[0].push(s.rho);
        stats[1].push(s.rho * s.rho);
        stats[2].push(b(0, 0) * b(0, 1));
        stats[3].push(b(0, 1) * b(0, 3));
        stats[4].push(b(0, 3) * b(0, 3));
        stats[5].push(it.alpha[0] * it.alpha[0]);
        stats[6].push(it.z.sign() * it.delta[1]);
    }

    // moments of rho ~ N(0.5, 0.3^2) truncated to (0, 1), by midpoint rule
    let (mut w_sum, mut e1, mut e2) = (0.0, 0.0, 0.0);
    for k in 0..100_000 {
        let r = (k as f64 + 0.5) / 100_000.0;
        let w = (-0.5 * ((r - hyper.rho_mean) / hyper.rho_sigma).powi(2)).exp();
        w_sum += w;
        e1 += w * r;
        e2 += w * r * r;
    }
    let (e1, e2) = (e1 / w_sum, e2 / w_sum);
    let want = [e1, e2, e1, e2, 1.0, hyper.alpha_scale.powi(2), hyper.delta_mean[1]];
    let names = ["rho", "rho^2", "b0*b1", "b1*b3", "b3^2", "alpha1^2", "sign(z)*delta2"];
    for (k, x) in stats.iter().enumerate() {
        let m = x.iter().sum::<f64>() / x.len() as f64;
        let z = (m - want[k]) / batch_se(x);
        assert!(z.abs() < 4.0, "{}: mean {m:.4}, prior {:.4}, z {z:.2}", names[k], want[k]);
    }
}
