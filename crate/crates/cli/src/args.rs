use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "pum", version, about = "Bayesian ideal points under the probit unfolding model")]
pub struct Cli {
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true, env = "PUM_THREADS")]
    pub threads: Option<usize>,

    /// JSON config with optional "hyper", "control", "preprocess" and
    /// "layout" objects; a run manifest is accepted too. Flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Clean a vote matrix (CSV or fixed-width .ord).
    Preprocess(PreprocessArgs),
    /// Draw prior-predictive Yes probabilities.
    TuneHyper(TuneArgs),
    /// Fit the static model.
    FitStatic(FitStaticArgs),
    /// Fit the dynamic model.
    FitDynamic(FitDynamicArgs),
    /// Posterior mean Yes probability of every cell.
    Predict(PredictArgs),
    /// Blocked WAIC.
    Waic(WaicArgs),
    /// Posterior rank quantiles.
    Rank(RankArgs),
    /// Item response curves.
    Curves(CurvesArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct HyperArgs {
    /// Prior mean of static ideal points [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub beta_mean: Option<f64>,
    /// Prior variance of static ideal points [default: 1]
    #[arg(long)]
    pub beta_var: Option<f64>,
    /// Location pair of the discrimination prior, "a,b" [default: 0,0]
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_mean: Option<String>,
    /// Scale (sd) omega of the discrimination prior [default: 5]
    #[arg(long)]
    pub alpha_scale: Option<f64>,
    /// Mean pair mu of the cutpoint prior, "a,b" [default: -2,10]
    #[arg(long, allow_hyphen_values = true)]
    pub delta_mean: Option<String>,
    /// Scale (sd) kappa of the cutpoint prior [default: 3.1622776601683795]
    #[arg(long)]
    pub delta_scale: Option<f64>,
    /// Mean of the truncated-normal prior on rho [default: 0.9]
    #[arg(long)]
    pub rho_mean: Option<f64>,
    /// Scale of the truncated-normal prior on rho [default: 0.04]
    #[arg(long)]
    pub rho_sigma: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ControlArgs {
    /// Total sweeps [default: 400000]
    #[arg(long)]
    pub num_iter: Option<usize>,
    /// Sweeps discarded before storage [default: 200000]
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Keep every k-th post-burn-in sweep [default: 10]
    #[arg(long, alias = "keep-iter")]
    pub keep: Option<usize>,
    /// Probability of trying the reflection move instead of a prior redraw [default: 0.1]
    #[arg(long)]
    pub flip_rate: Option<f64>,
    /// Random-walk step for rho [default: 0.1]
    #[arg(long)]
    pub sd_prop_rho: Option<f64>,
    /// Random seed [default: 1]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Report progress on standard error
    #[arg(long)]
    pub verbose: bool,
    /// Sweeps between progress lines (0 = a twentieth of the run)
    #[arg(long, default_value_t = 0)]
    pub progress_every: usize,
    /// Flush sample files every K stored draws
    #[arg(long, default_value_t = 100)]
    pub flush_every: usize,
}

#[derive(Args, Debug)]
pub struct PreprocessArgs {
    /// CSV vote matrix (1/0/NA or TRUE/FALSE/NA)
    #[arg(long, conflicts_with = "ord", required_unless_present = "ord")]
    pub votes: Option<PathBuf>,
    /// Fixed-width .ord roll-call file
    #[arg(long)]
    pub ord: Option<PathBuf>,
    /// Legislator to drop: row index (0-based) or label pattern; repeatable
    #[arg(long = "leg-rm")]
    pub leg_rm: Vec<String>,
    /// Merge group "PATTERN[,PATTERN...][:PARTY]"; repeatable
    #[arg(long = "combine")]
    pub combine: Vec<String>,
    /// Max missing fraction per legislator [default: 1]
    #[arg(long)]
    pub lop_leg: Option<f64>,
    /// Minority-share threshold for dropping items [default: 0]
    #[arg(long)]
    pub lop_issue: Option<f64>,
    /// Output CSV
    #[arg(long)]
    pub out: PathBuf,
    /// Optional JSON report
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TuneArgs {
    #[command(flatten)]
    pub hyper: HyperArgs,
    /// Number of simulated legislators
    #[arg(long, default_value_t = 1000)]
    pub n_leg: usize,
    /// Number of simulated issues
    #[arg(long, default_value_t = 1000)]
    pub n_issue: usize,
    /// Random seed
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output CSV with one theta per line
    #[arg(long, default_value = "theta.csv")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct FitStaticArgs {
    /// CSV vote matrix
    #[arg(long)]
    pub votes: PathBuf,
    /// Legislator kept on the positive side (label pattern or 0-based row)
    #[arg(long)]
    pub pos_leg: String,
    #[command(flatten)]
    pub hyper: HyperArgs,
    #[command(flatten)]
    pub control: ControlArgs,
    /// Output directory
    #[arg(long, default_value = "pum-static")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct FitDynamicArgs {
    /// CSV vote matrix
    #[arg(long)]
    pub votes: PathBuf,
    /// CSV of item,term pairs
    #[arg(long)]
    pub time_index: PathBuf,
    /// Positive reference "PATTERN[@i,j,...]" with 1-based term positions
    /// within that legislator's span; repeatable
    #[arg(long)]
    pub pos_leg: Vec<String>,
    /// Negative reference, same form as --pos-leg; repeatable
    #[arg(long)]
    pub neg_leg: Vec<String>,
    #[command(flatten)]
    pub hyper: HyperArgs,
    #[command(flatten)]
    pub control: ControlArgs,
    /// Output directory
    #[arg(long, default_value = "pum-dynamic")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct PredictArgs {
    /// CSV vote matrix used for the fit
    #[arg(long)]
    pub votes: PathBuf,
    /// Directory written by fit-static or fit-dynamic
    #[arg(long)]
    pub samples: PathBuf,
    /// Output CSV (legislators x items)
    #[arg(long, default_value = "predicted.csv")]
    pub out: PathBuf,
    /// Memory budget in bytes for materializing all draws
    #[arg(long, default_value_t = 4 << 30)]
    pub memory_budget: usize,
}

#[derive(Args, Debug)]
pub struct WaicArgs {
    /// CSV vote matrix used for the fit
    #[arg(long)]
    pub votes: PathBuf,
    /// Directory written by fit-static or fit-dynamic
    #[arg(long)]
    pub samples: PathBuf,
    /// Memory budget in bytes for materializing all draws
    #[arg(long, default_value_t = 4 << 30)]
    pub memory_budget: usize,
    /// Output JSON summary
    #[arg(long, default_value = "waic.json")]
    pub out: PathBuf,
    /// Optional CSV report (block, waic, lppd, p_waic)
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RankArgs {
    /// Directory written by fit-static
    #[arg(long)]
    pub samples: PathBuf,
    /// Comma-separated quantiles
    #[arg(long, default_value = "0.05,0.5,0.95")]
    pub quantiles: String,
    /// Output CSV
    #[arg(long, default_value = "ranks.csv")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct CurvesArgs {
    /// Directory written by a fit
    #[arg(long)]
    pub samples: PathBuf,
    /// Item label or 1-based column number
    #[arg(long)]
    pub item: String,
    /// Grid range "lo,hi"
    #[arg(long, default_value = "-4,2", allow_hyphen_values = true)]
    pub range: String,
    /// Grid points
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// Credible level of the band
    #[arg(long, default_value_t = 0.95)]
    pub ci: f64,
    /// Output CSV
    #[arg(long, default_value = "curve.csv")]
    pub out: PathBuf,
}
