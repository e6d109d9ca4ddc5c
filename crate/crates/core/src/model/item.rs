use rand::Rng;
use serde::{Deserialize, Serialize};

use super::params::Hyperparams;
use crate::stats::draw_trunc_normal;

/// Which quadrant the discrimination pair occupies.
///
/// `Pos` means `alpha_1 > 0 > alpha_2` (the Yes position sits between the
/// two No positions in increasing order); `Neg` is the mirror image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Pos,
    Neg,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Pos => 1.0,
            Branch::Neg => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Branch::Pos => Branch::Neg,
            Branch::Neg => Branch::Pos,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Branch::Pos => 1,
            Branch::Neg => -1,
        }
    }

    /// Half-line `(lo, hi)` for component `c` (0 or 1) of alpha.
    pub fn alpha_support(self, c: usize) -> (f64, f64) {
        let positive = (self == Branch::Pos) == (c == 0);
        if positive {
            (0.0, f64::INFINITY)
        } else {
            (f64::NEG_INFINITY, 0.0)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ItemParams {
    pub alpha: [f64; 2],
    pub delta: [f64; 2],
    pub z: Branch,
}

impl ItemParams {
    pub fn new(alpha: [f64; 2], delta: [f64; 2], z: Branch) -> Self {
        Self { alpha, delta, z }
    }

    /// Item with the branch implied by the signs of `alpha`, if valid.
    pub fn from_alpha_delta(alpha: [f64; 2], delta: [f64; 2]) -> Option<Self> {
        let z = if alpha[0] > 0.0 && alpha[1] < 0.0 {
            Branch::Pos
        } else if alpha[0] < 0.0 && alpha[1] > 0.0 {
            Branch::Neg
        } else {
            return None;
        };
        Some(Self { alpha, delta, z })
    }

    /// Item implied by the three policy positions of the quadratic-utility
    /// model: `alpha = 2 (psi_2 - psi_{1,3})`, `delta = (psi_{1,3} + psi_2) / 2`.
    pub fn from_psi(psi: [f64; 3]) -> Option<Self> {
        let alpha = [2.0 * (psi[1] - psi[0]), 2.0 * (psi[1] - psi[2])];
        let delta = [(psi[0] + psi[1]) / 2.0, (psi[2] + psi[1]) / 2.0];
        Self::from_alpha_delta(alpha, delta)
    }

    pub fn is_valid(&self) -> bool {
        let [a1, a2] = self.alpha;
        let quadrant = match self.z {
            Branch::Pos => a1 > 0.0 && a2 < 0.0,
            Branch::Neg => a1 < 0.0 && a2 > 0.0,
        };
        quadrant && self.delta.iter().all(|d| d.is_finite())
    }

    /// The reflection `(alpha, delta, z) -> (-alpha, -delta, -z)`.
    pub fn reflect(&self) -> Self {
        Self {
            alpha: [-self.alpha[0], -self.alpha[1]],
            delta: [-self.delta[0], -self.delta[1]],
            z: self.z.flip(),
        }
    }

    /// Means of the latent utility triple for ideal point `beta`.
    pub fn latent_means(&self, beta: f64) -> [f64; 3] {
        [
            -self.alpha[0] * (beta - self.delta[0]),
            0.0,
            -self.alpha[1] * (beta - self.delta[1]),
        ]
    }

    /// Draw `(alpha, delta)` from the prior conditional on branch `z`.
    pub fn sample_prior<R: Rng + ?Sized>(z: Branch, hyper: &Hyperparams, rng: &mut R) -> Self {
        let s = z.sign();
        let mut alpha = [0.0; 2];
        for (c, a) in alpha.iter_mut().enumerate() {
            let (lo, hi) = z.alpha_support(c);
            *a = draw_trunc_normal(s * hyper.alpha_mean[c], hyper.alpha_scale, lo, hi, rng);
        }
        let mut delta = [0.0; 2];
        for (c, d) in delta.iter_mut().enumerate() {
            let e: f64 = rng.sample(rand_distr::StandardNormal);
            *d = s * hyper.delta_mean[c] + hyper.delta_scale * e;
        }
        Self { alpha, delta, z }
    }
}
