//! Bayesian probit unfolding models (PUM) for binary vote and preference
//! matrices.
//!
//! The crate covers the full workflow: roll-call ingestion and cleaning
//! ([`io`]), the response model and priors ([`model`]), MCMC samplers for
//! static and dynamic ideal points ([`sampler`]), and posterior
//! post-processing such as WAIC, rank summaries and item characteristic
//! curves ([`analytics`]). Numerical kernels live in [`stats`].

pub mod analytics;
pub mod error;
pub mod io;
pub mod model;
pub mod sampler;
pub mod stats;

pub use error::{PumError, Result};
