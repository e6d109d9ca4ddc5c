//! Markov chain Monte Carlo for the static and dynamic models.

mod data;
mod state;
mod steps;

pub use data::{ModelData, Obs};
pub use state::{ChainState, StreamKind, SweepRng};
pub use steps::{
    beta_information, collapsed_loglik, gibbs_beta, gibbs_item, gibbs_ystar, mh_leg_reflections, mh_z_moves,
    update_triple, MoveCounts,
};
mod dynamic;
pub use dynamic::{ffbs_beta, ffbs_path, log_rho_target, mh_rho, mh_term_blocks, SignRefs};
mod chain;
mod output;
pub use chain::{fit_dynamic, fit_static, fit_static_with, Chain, FitOptions, Identification};
pub use output::{
    Acceptance, Draw, DrawLayout, DrawSink, MemorySink, PosteriorSamples, Rate, RunInfo,
};
