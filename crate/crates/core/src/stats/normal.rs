use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// ln(sqrt(2 pi))
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

// Below this argument the erfc route loses relative accuracy to underflow.
const DEEP_TAIL: f64 = -35.0;

pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

pub fn log_std_normal_pdf(x: f64) -> f64 {
    -0.5 * x * x - LN_SQRT_2PI
}

/// Standard normal CDF, accurate to a few ulps across the real line.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Mills ratio Q(t)/phi(t) for large positive t, by continued fraction.
fn mills_ratio_tail(t: f64) -> f64 {
    let mut acc = t;
    for k in (1..=60).rev() {
        acc = t + k as f64 / acc;
    }
    1.0 / acc
}

/// `ln Phi(x)` without underflow for very negative `x`.
pub fn log_std_normal_cdf(x: f64) -> f64 {
    if x == f64::INFINITY {
        0.0
    } else if x > 0.0 {
        (-std_normal_cdf(-x)).ln_1p()
    } else if x > DEEP_TAIL {
        std_normal_cdf(x).ln()
    } else if x == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        log_std_normal_pdf(x) + mills_ratio_tail(-x).ln()
    }
}

/// `phi(x) / Phi(x)`, the hazard of the reflected normal.
pub fn inv_mills_ratio(x: f64) -> f64 {
    if x > DEEP_TAIL {
        std_normal_pdf(x) / std_normal_cdf(x)
    } else {
        1.0 / mills_ratio_tail(-x)
    }
}
