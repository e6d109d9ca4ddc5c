//! Bivariate normal orthant probabilities.
//!
//! Port of Alan Genz's BVNU (Drezner & Wesolowsky reduction with
//! Gauss-Legendre quadrature whose order is chosen by |rho|), following the
//! corrected negative-correlation branch of his MATLAB version.

use std::f64::consts::PI;
use std::sync::OnceLock;

use super::normal::std_normal_cdf;
use crate::error::{PumError, Result};

const TWO_PI: f64 = 2.0 * PI;

// (weight, abscissa) on [-1, 1], positive half of the symmetric rule.
const GL_6: [(f64, f64); 3] = [
    (0.171_324_492_379_170_5, 0.932_469_514_203_152_2),
    (0.360_761_573_048_138_4, 0.661_209_386_466_264_7),
    (0.467_913_934_572_690_4, 0.238_619_186_083_197_0),
];

const GL_12: [(f64, f64); 6] = [
    (0.047_175_336_386_511_77, 0.981_560_634_246_719_1),
    (0.106_939_325_995_318_3, 0.904_117_256_370_475_0),
    (0.160_078_328_543_346_4, 0.769_902_674_194_305_0),
    (0.203_167_426_723_065_9, 0.587_317_954_286_617_1),
    (0.233_492_536_538_354_7, 0.367_831_498_998_180_2),
    (0.249_147_045_813_402_9, 0.125_233_408_511_469_2),
];

const GL_20: [(f64, f64); 10] = [
    (0.017_614_007_139_152_12, 0.993_128_599_185_094_9),
    (0.040_601_429_800_386_94, 0.963_971_927_277_913_8),
    (0.062_672_048_334_109_06, 0.912_234_428_251_325_9),
    (0.083_276_741_576_704_75, 0.839_116_971_822_218_8),
    (0.101_930_119_817_240_4, 0.746_331_906_460_150_8),
    (0.118_194_531_961_518_4, 0.636_053_680_726_515_0),
    (0.131_688_638_449_176_6, 0.510_867_001_950_827_1),
    (0.142_096_109_318_382_1, 0.373_706_088_715_419_6),
    (0.149_172_986_472_603_7, 0.227_785_851_141_645_1),
    (0.152_753_387_130_725_9, 0.076_526_521_133_497_33),
];

fn rule(abs_rho: f64) -> &'static [(f64, f64)] {
    if abs_rho < 0.3 {
        &GL_6
    } else if abs_rho < 0.75 {
        &GL_12
    } else {
        &GL_20
    }
}

/// Limits and correlation of a standard bivariate normal lower orthant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BvnSpec {
    pub h: f64,
    pub k: f64,
    pub rho: f64,
}

impl BvnSpec {
    pub fn new(h: f64, k: f64, rho: f64) -> Result<Self> {
        if !(rho > -1.0 && rho < 1.0) {
            return Err(PumError::InvalidParameter(format!(
                "correlation {rho} must lie strictly inside (-1, 1)"
            )));
        }
        if h.is_nan() || k.is_nan() {
            return Err(PumError::InvalidParameter("NaN integration limit".into()));
        }
        Ok(Self { h, k, rho })
    }

    /// P(Z1 <= h, Z2 <= k).
    pub fn cdf(&self) -> f64 {
        bvn_cdf(self.h, self.k, self.rho)
    }
}

/// Precomputed sine nodes for the moderate-correlation branch.
struct ModerateKernel {
    half_asin: f64,
    nodes: Vec<(f64, f64)>, // (weight, sin(asr * x))
}

impl ModerateKernel {
    fn new(rho: f64) -> Self {
        let half_asin = rho.asin() / 2.0;
        let mut nodes = Vec::with_capacity(40);
        for &(w, x) in rule(rho.abs()) {
            for x in [1.0 - x, 1.0 + x] {
                nodes.push((w, (half_asin * x).sin()));
            }
        }
        Self { half_asin, nodes }
    }

    /// Upper orthant P(X > h, Y > k).
    fn upper(&self, h: f64, k: f64) -> f64 {
        let hk = h * k;
        let hs = (h * h + k * k) / 2.0;
        let sum: f64 = self
            .nodes
            .iter()
            .map(|&(w, sn)| w * ((sn * hk - hs) / (1.0 - sn * sn)).exp())
            .sum();
        sum * self.half_asin / TWO_PI + std_normal_cdf(-h) * std_normal_cdf(-k)
    }
}

fn half_kernel() -> &'static ModerateKernel {
    static KERNEL: OnceLock<ModerateKernel> = OnceLock::new();
    KERNEL.get_or_init(|| ModerateKernel::new(0.5))
}

/// Upper orthant for |rho| >= 0.925.
fn upper_high_corr(h: f64, mut k: f64, r: f64) -> f64 {
    let mut hk = h * k;
    if r < 0.0 {
        k = -k;
        hk = -hk;
    }
    let mut bvn = 0.0;
    if r.abs() < 1.0 {
        let a_sq = (1.0 - r) * (1.0 + r);
        let mut a = a_sq.sqrt();
        let b_sq = (h - k) * (h - k);
        let c = (4.0 - hk) / 8.0;
        let d = (12.0 - hk) / 80.0;
        let asr = -(b_sq / a_sq + hk) / 2.0;
        if asr > -100.0 {
            bvn = a * asr.exp() * (1.0 - c * (b_sq - a_sq) * (1.0 - d * b_sq) / 3.0 + c * d * a_sq * a_sq);
        }
        if hk > -100.0 {
            let b = b_sq.sqrt();
            let sp = TWO_PI.sqrt() * std_normal_cdf(-b / a);
            bvn -= (-hk / 2.0).exp() * sp * b * (1.0 - c * b_sq * (1.0 - d * b_sq) / 3.0);
        }
        a /= 2.0;
        let mut sum = 0.0;
        for &(w, x) in rule(r.abs()) {
            for x in [1.0 - x, 1.0 + x] {
                let xs = (a * x) * (a * x);
                let asr = -(b_sq / xs + hk) / 2.0;
                if asr > -100.0 {
                    let sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
                    let rs = (1.0 - xs).sqrt();
                    let ep = (-(hk / 2.0) * xs / ((1.0 + rs) * (1.0 + rs))).exp() / rs;
                    sum += w * asr.exp() * (sp - ep);
                }
            }
        }
        bvn = (a * sum - bvn) / TWO_PI;
    }
    if r > 0.0 {
        bvn + std_normal_cdf(-h.max(k))
    } else if h >= k {
        -bvn
    } else {
        let l = if h < 0.0 {
            std_normal_cdf(k) - std_normal_cdf(h)
        } else {
            std_normal_cdf(-h) - std_normal_cdf(-k)
        };
        l - bvn
    }
}

/// Upper orthant P(X > dh, Y > dk); handles infinite limits.
fn bvn_upper(dh: f64, dk: f64, r: f64, moderate: Option<&ModerateKernel>) -> f64 {
    let p = if dh == f64::INFINITY || dk == f64::INFINITY {
        0.0
    } else if dh == f64::NEG_INFINITY {
        if dk == f64::NEG_INFINITY {
            1.0
        } else {
            std_normal_cdf(-dk)
        }
    } else if dk == f64::NEG_INFINITY {
        std_normal_cdf(-dh)
    } else if r == 0.0 {
        std_normal_cdf(-dh) * std_normal_cdf(-dk)
    } else if r.abs() < 0.925 {
        match moderate {
            Some(kernel) => kernel.upper(dh, dk),
            None => ModerateKernel::new(r).upper(dh, dk),
        }
    } else {
        upper_high_corr(dh, dk, r)
    };
    p.clamp(0.0, 1.0)
}

/// P(Z1 <= h, Z2 <= k) for a standard bivariate normal with correlation `rho`.
///
/// `rho` must lie in (-1, 1); limits may be infinite.
pub fn bvn_cdf(h: f64, k: f64, rho: f64) -> f64 {
    debug_assert!(rho > -1.0 && rho < 1.0);
    bvn_upper(-h, -k, rho, None)
}

/// [`bvn_cdf`] at correlation 1/2 with cached quadrature nodes. This is the
/// response-probability kernel and sits in the sampler's inner loops.
pub fn bvn_cdf_half(h: f64, k: f64) -> f64 {
    bvn_upper(-h, -k, 0.5, Some(half_kernel()))
}
