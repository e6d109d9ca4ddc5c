//! Truncated normal variates (Robert, 1995) and log-densities.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use super::normal::{log_std_normal_cdf, log_std_normal_pdf, std_normal_cdf};
use crate::error::{PumError, Result};

/// Standardized bound at which one-sided tails switch from plain normal
/// rejection to the exponential proposal.
const TAIL_CROSSOVER: f64 = 0.4;
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

fn check_interval(lower: f64, upper: f64) -> Result<()> {
    if lower < upper {
        Ok(())
    } else {
        Err(PumError::InvalidInterval { lower, upper })
    }
}

/// Draw from N(mean, sd^2) restricted to the open interval (lower, upper).
pub fn sample_trunc_normal<R: Rng + ?Sized>(
    mean: f64,
    sd: f64,
    lower: f64,
    upper: f64,
    rng: &mut R,
) -> Result<f64> {
    check_interval(lower, upper)?;
    if !(sd > 0.0) || !mean.is_finite() {
        return Err(PumError::InvalidParameter(format!(
            "truncated normal needs finite mean and sd > 0 (mean {mean}, sd {sd})"
        )));
    }
    Ok(draw_trunc_normal(mean, sd, lower, upper, rng))
}

/// Unchecked variant used on hot paths; the caller guarantees
/// `lower < upper` and `sd > 0`.
pub(crate) fn draw_trunc_normal<R: Rng + ?Sized>(
    mean: f64,
    sd: f64,
    lower: f64,
    upper: f64,
    rng: &mut R,
) -> f64 {
    let a = (lower - mean) / sd;
    let b = (upper - mean) / sd;
    for _ in 0..64 {
        let x = mean + sd * std_trunc(a, b, rng);
        if x > lower && x < upper {
            return x;
        }
    }
    // Only reachable when (lower, upper) holds almost no representable points.
    0.5 * (lower + upper)
}

fn std_trunc<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    if a == f64::NEG_INFINITY && b == f64::INFINITY {
        rng.sample(StandardNormal)
    } else if a >= 0.0 {
        upper_side(a, b, rng)
    } else if b <= 0.0 {
        -upper_side(-b, -a, rng)
    } else if b - a >= SQRT_2PI {
        loop {
            let z: f64 = rng.sample(StandardNormal);
            if z > a && z < b {
                return z;
            }
        }
    } else {
        // interval straddles zero and is narrow
        loop {
            let z = rng.random_range(a..b);
            let u: f64 = rng.random();
            if u < (-0.5 * z * z).exp() && z > a {
                return z;
            }
        }
    }
}

/// Sample on [a, b] with 0 <= a < b <= inf.
fn upper_side<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    let lambda = 0.5 * (a + (a * a + 4.0).sqrt());
    let uniform_width = (0.5 + 0.25 * (a * a - a * (a * a + 4.0).sqrt())).exp() / lambda;
    if b - a < uniform_width {
        loop {
            let z = rng.random_range(a..b);
            let u: f64 = rng.random();
            if u < (0.5 * (a * a - z * z)).exp() && z > a {
                return z;
            }
        }
    } else if a < TAIL_CROSSOVER {
        loop {
            let z: f64 = rng.sample(StandardNormal);
            if z > a && z < b {
                return z;
            }
        }
    } else {
        loop {
            let e: f64 = rng.sample(Exp1);
            let z = a + e / lambda;
            let u: f64 = rng.random();
            if z > a && z < b && u < (-0.5 * (z - lambda) * (z - lambda)).exp() {
                return z;
            }
        }
    }
}

/// `ln(Phi(b) - Phi(a))` for standardized a < b, computed on the side of
/// zero that avoids cancellation.
pub(crate) fn log_normal_mass(a: f64, b: f64) -> f64 {
    if a > 0.0 {
        // upper tail: Phi(-a) - Phi(-b)
        let la = log_std_normal_cdf(-a);
        let lb = log_std_normal_cdf(-b);
        la + (-(lb - la).exp()).ln_1p()
    } else if b < 0.0 {
        let lb = log_std_normal_cdf(b);
        let la = log_std_normal_cdf(a);
        lb + (-(la - lb).exp()).ln_1p()
    } else {
        (1.0 - std_normal_cdf(a) - std_normal_cdf(-b)).ln()
    }
}

/// Log-density of N(mean, sd^2) truncated to (lower, upper); `-inf` outside.
pub fn trunc_normal_logpdf(x: f64, mean: f64, sd: f64, lower: f64, upper: f64) -> Result<f64> {
    check_interval(lower, upper)?;
    if !(sd > 0.0) {
        return Err(PumError::InvalidParameter(format!("sd must be positive, got {sd}")));
    }
    if !(x > lower && x < upper) {
        return Ok(f64::NEG_INFINITY);
    }
    let a = (lower - mean) / sd;
    let b = (upper - mean) / sd;
    Ok(log_std_normal_pdf((x - mean) / sd) - sd.ln() - log_normal_mass(a, b))
}
