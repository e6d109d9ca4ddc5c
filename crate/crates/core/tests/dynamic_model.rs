use rand::Rng;
use rand_distr::StandardNormal;

use pum::model::{simulate_from_params, Branch, ControlParams, Hyperparams, ItemParams};
use pum::sampler::{fit_dynamic, fit_static, PosteriorSamples, SignRefs};
use pum::stats::RngStream;

fn ranks(x: &[f64]) -> Vec<f64> {
    let mut o: Vec<usize> = (0..x.len()).collect();
    o.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut r = vec![0.0; x.len()];
    for (k, &i) in o.iter().enumerate() {
        r[i] = k as f64;
    }
    r
}

fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let (ra, rb) = (ranks(a), ranks(b));
    let m = (a.len() as f64 - 1.0) / 2.0;
    let (mut ab, mut aa, mut bb) = (0.0, 0.0, 0.0);
    for (x, y) in ra.iter().zip(&rb) {
        ab += (x - m) * (y - m);
        aa += (x - m).powi(2);
        bb += (y - m).powi(2);
    }
    ab / (aa * bb).sqrt()
}

fn quantile(mut x: Vec<f64>, q: f64) -> f64 {
    x.sort_by(f64::total_cmp);
    x[((x.len() - 1) as f64 * q).round() as usize]
}

fn prior_items(n: usize, hyper: &Hyperparams, rng: &mut RngStream) -> Vec<ItemParams> {
    (0..n)
        .map(|_| {
            let z = if rng.random::<bool>() { Branch::Pos } else { Branch::Neg };
            ItemParams::sample_prior(z, hyper, rng)
        })
        .collect()
}

fn interval(s: &PosteriorSamples, col: usize) -> (f64, f64) {
    let c = s.beta.column(col).to_vec();
    (quantile(c.clone(), 0.025), quantile(c, 0.975))
}

#[test]
fn single_term_matches_static_fit() {
    let hyper = Hyperparams::default();
    let mut rng = RngStream::new(21, 0);
    let (n, j) = (20, 40);
    let beta: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.sample(StandardNormal)]).collect();
    let items = prior_items(j, &hyper, &mut rng);
    let votes = simulate_from_params(&beta, &items, &vec![0; j], &mut rng);
    let pos = (0..n).max_by(|&a, &b| beta[a][0].total_cmp(&beta[b][0])).unwrap();

    let control = ControlParams { num_iter: 6000, burn_in: 2000, keep_iter: 4, seed: 1, ..Default::default() };
    let st = fit_static(&votes, &hyper, &control, pos).unwrap();
    let dy_votes = votes.clone().with_time_index(vec!["2000".to_string(); j]).unwrap();
    let dy = fit_dynamic(&dy_votes, &hyper, &ControlParams { seed: 2, ..control }, &SignRefs::positive(pos)).unwrap();
    assert_eq!(dy.beta.ncols(), n);
    for i in 0..n {
        let (a, b) = (interval(&st, i), interval(&dy, i));
        assert!(a.0 <= b.1 && b.0 <= a.1, "legislator {i}: static {a:?} vs dynamic {b:?}");
    }
}

#[test]
fn recovers_synthetic_paths() {
    let hyper = Hyperparams::default();
    let mut rng = RngStream::new(22, 0);
    let (n, nt, per_term, rho) = (30, 20, 30, 0.9f64);
    let paths: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let mut p = vec![rng.sample::<f64, _>(StandardNormal)];
            for t in 1..nt {
                let e: f64 = rng.sample(StandardNormal);
                p.push(rho * p[t - 1] + (1.0 - rho * rho).sqrt() * e);
            }
            p
        })
        .collect();
    let item_term: Vec<usize> = (0..nt * per_term).map(|j| j / per_term).collect();
    let items = prior_items(item_term.len(), &hyper, &mut rng);
    let votes = simulate_from_params(&paths, &items, &item_term, &mut rng);
    let mean_path = |i: usize| paths[i].iter().sum::<f64>();
    let pos = (0..n).max_by(|&a, &b| mean_path(a).total_cmp(&mean_path(b))).unwrap();

    let control = ControlParams { num_iter: 4000, burn_in: 2000, keep_iter: 5, seed: 3, ..Default::default() };
    let s = fit_dynamic(&votes, &hyper, &control, &SignRefs::positive(pos)).unwrap();
    let lookup = s.layout.beta_lookup();
    let mut total = 0.0;
    for t in 0..nt {
        let est: Vec<f64> = (0..n).map(|i| quantile(s.beta.column(lookup[i * nt + t].unwrap()).to_vec(), 0.5)).collect();
        let truth: Vec<f64> = (0..n).map(|i| paths[i][t]).collect();
        total += spearman(&est, &truth);
    }
    let avg = total / nt as f64;
    assert!(avg >= 0.85, "average per-term spearman {avg:.3}");
}
