//! Three independent unit-variance normals conditioned on which coordinate
//! is the largest.
//!
//! With means `m` and winner `k`, the winner's marginal density is
//! `phi(y - m_k) Phi(y - m_a) Phi(y - m_b)`. Its log has second derivative
//! in [-3, -1], so a unit-variance normal centred at the mode is a valid
//! rejection envelope with acceptance at least 1/sqrt(3), whatever the means.

use std::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;
use rand_distr::StandardNormal;

use super::bvn::bvn_cdf_half;
use super::normal::{inv_mills_ratio, log_std_normal_cdf};
use super::truncnorm::draw_trunc_normal;

/// Below this the orthant probability is recomputed in log space.
const TINY_PROB: f64 = 1e-280;

fn others(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        2 => (0, 1),
        _ => panic!("coordinate index {k} out of range"),
    }
}

struct WinnerDensity {
    mk: f64,
    ma: f64,
    mb: f64,
}

impl WinnerDensity {
    fn new(means: &[f64; 3], k: usize) -> Self {
        let (a, b) = others(k);
        Self {
            mk: means[k],
            ma: means[a],
            mb: means[b],
        }
    }

    fn log_density(&self, y: f64) -> f64 {
        let d = y - self.mk;
        -0.5 * d * d + log_std_normal_cdf(y - self.ma) + log_std_normal_cdf(y - self.mb)
    }

    fn score(&self, y: f64) -> f64 {
        -(y - self.mk) + inv_mills_ratio(y - self.ma) + inv_mills_ratio(y - self.mb)
    }

    fn curvature(&self, y: f64) -> f64 {
        let dl = |x: f64| {
            let l = inv_mills_ratio(x);
            -l * (x + l)
        };
        -1.0 + dl(y - self.ma) + dl(y - self.mb)
    }

    /// Mode by safeguarded Newton. The score is decreasing with slope at
    /// most -1, so the mode lies in [mk, mk + score(mk)].
    fn mode(&self) -> f64 {
        let mut lo = self.mk;
        let mut hi = self.mk + self.score(self.mk);
        let mut y = lo;
        for _ in 0..100 {
            let g = self.score(y);
            if g > 0.0 {
                lo = y;
            } else {
                hi = y;
            }
            let mut next = y - g / self.curvature(y).min(-1.0);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - y).abs() <= 1e-13 * (1.0 + y.abs()) || hi - lo <= 1e-13 * (1.0 + y.abs()) {
                return next;
            }
            y = next;
        }
        y
    }
}

/// `ln P(argmax = k)` for independent `N(means[i], 1)`.
pub fn log_prob_argmax(means: &[f64; 3], k: usize) -> f64 {
    let (a, b) = others(k);
    let p = bvn_cdf_half(
        (means[k] - means[a]) * FRAC_1_SQRT_2,
        (means[k] - means[b]) * FRAC_1_SQRT_2,
    );
    if p > TINY_PROB {
        return p.ln();
    }
    // Trapezoid rule around the mode; the integrand is bounded by a unit
    // Gaussian bump there, so +-10 covers it to double precision.
    let dens = WinnerDensity::new(means, k);
    let mode = dens.mode();
    let peak = dens.log_density(mode);
    let step = 0.05;
    let sum: f64 = (-200..=200)
        .map(|i| (dens.log_density(mode + i as f64 * step) - peak).exp())
        .sum();
    peak + (sum * step).ln() - super::normal::LN_SQRT_2PI
}

/// Exact draw of the triple given that coordinate `k` is the maximum.
pub fn sample_given_argmax<R: Rng + ?Sized>(means: &[f64; 3], k: usize, rng: &mut R) -> [f64; 3] {
    let dens = WinnerDensity::new(means, k);
    let mode = dens.mode();
    let peak = dens.log_density(mode);
    let winner = loop {
        let z: f64 = rng.sample(StandardNormal);
        let y = mode + z;
        let log_ratio = dens.log_density(y) - peak + 0.5 * z * z;
        let u: f64 = rng.random();
        if u.ln() < log_ratio {
            break y;
        }
    };
    let (a, b) = others(k);
    let mut out = [0.0; 3];
    out[k] = winner;
    out[a] = draw_trunc_normal(means[a], 1.0, f64::NEG_INFINITY, winner, rng);
    out[b] = draw_trunc_normal(means[b], 1.0, f64::NEG_INFINITY, winner, rng);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::RngStream;

    #[test]
    fn log_space_path_matches_direct_orthant() {
        let dens_case = |m: [f64; 3], k: usize| {
            let dens = WinnerDensity::new(&m, k);
            let mode = dens.mode();
            let peak = dens.log_density(mode);
            let sum: f64 = (-200..=200)
                .map(|i| (dens.log_density(mode + i as f64 * 0.05) - peak).exp())
                .sum();
            peak + (sum * 0.05).ln() - super::super::normal::LN_SQRT_2PI
        };
        for m in [[0.0, 0.0, 0.0], [1.0, -2.0, 0.5], [-3.0, 2.0, 4.0], [5.0, 0.0, -5.0]] {
            for k in 0..3 {
                let direct = log_prob_argmax(&m, k);
                let numeric = dens_case(m, k);
                assert!((direct - numeric).abs() < 1e-10, "{m:?} {k}: {direct} vs {numeric}");
            }
        }
    }

    #[test]
    fn extreme_means_stay_finite() {
        let m = [60.0, 0.0, 80.0];
        let lp = log_prob_argmax(&m, 1);
        assert!(lp.is_finite() && lp < -1000.0, "{lp}");
        let mut rng = RngStream::new(3, 0);
        for _ in 0..100 {
            let y = sample_given_argmax(&m, 1, &mut rng);
            assert!(y[1] > y[0] && y[1] > y[2]);
        }
    }

    #[test]
    fn probabilities_sum_to_one() {
        for m in [[0.3, -1.0, 2.0], [10.0, 0.0, -4.0]] {
            let total: f64 = (0..3).map(|k| log_prob_argmax(&m, k).exp()).sum();
            assert!((total - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn conditional_draws_match_rejection_oracle() {
        // Compare the winner's mean under the exact sampler with plain
        // rejection from the unconstrained triple.
        let m = [0.7, 0.0, -0.4];
        let mut rng = RngStream::new(17, 0);
        let n = 200_000;
        let exact: f64 = (0..n).map(|_| sample_given_argmax(&m, 1, &mut rng)[1]).sum::<f64>() / n as f64;
        let mut acc = Vec::with_capacity(n);
        while acc.len() < n {
            let y: [f64; 3] = std::array::from_fn(|i| m[i] + rng.sample::<f64, _>(StandardNormal));
            if y[1] > y[0] && y[1] > y[2] {
                acc.push(y[1]);
            }
        }
        let oracle = acc.iter().sum::<f64>() / n as f64;
        // both means have s.e. near 0.8 / sqrt(n)
        assert!((exact - oracle).abs() < 5.0 * 0.8 * (2.0 / n as f64).sqrt(), "{exact} vs {oracle}");
    }
}
