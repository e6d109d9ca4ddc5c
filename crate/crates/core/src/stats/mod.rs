//! Probability kernels and random-variate generators shared by every other
//! module.

mod argmax;
mod bvn;
mod normal;
mod rng;
mod truncnorm;

pub use argmax::{log_prob_argmax, sample_given_argmax};
pub use bvn::{bvn_cdf, bvn_cdf_half, BvnSpec};
pub use normal::{
    inv_mills_ratio, log_std_normal_cdf, log_std_normal_pdf, std_normal_cdf, std_normal_pdf,
    LN_SQRT_2PI,
};
pub use rng::RngStream;
pub use truncnorm::{sample_trunc_normal, trunc_normal_logpdf};

pub(crate) use truncnorm::draw_trunc_normal;
