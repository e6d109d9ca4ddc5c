//! Vote data, item parameters, priors and the response probability.

mod density;
mod item;
mod params;
mod synth;
mod votes;

pub use density::{
    log_ar1_transition, log_ar1_transition_gap, log_beta_prior_static, log_item_prior, log_vote_prob, theta_prob,
};
pub use item::{Branch, ItemParams};
pub use params::{ControlParams, Hyperparams};
pub use synth::{simulate_from_params, simulate_utility_vote, simulate_votes, SyntheticTruth};
pub use votes::{LegislatorMeta, TermIndex, Vote, VoteMatrix};
