use std::time::Instant;

use rand::Rng;
use rand_distr::StandardNormal;

use super::data::ModelData;
use super::dynamic::{ffbs_beta, mh_rho, mh_term_blocks, ref_mean, SignRefs};
use super::output::{Acceptance, Draw, DrawLayout, DrawSink, MemorySink, PosteriorSamples, RunInfo};
use super::state::{ChainState, StreamKind, SweepRng};
use super::steps::{gibbs_beta, gibbs_item, gibbs_ystar, mh_leg_reflections, mh_z_moves, MoveCounts};
use crate::error::{PumError, Result};
use crate::model::{ControlParams, Hyperparams, ItemParams, VoteMatrix};

/// How the reflection symmetry is removed from stored draws.
#[derive(Clone, Debug, PartialEq)]
pub enum Identification {
    /// Store raw states.
    None,
    /// Reflect whenever this legislator's ideal point is negative.
    Static(usize),
    /// Reflect on the first positive reference (or, failing that, the first
    /// negative one); other references are only checked.
    Dynamic(SignRefs),
}

/// Extra switches for fitting.
#[derive(Clone, Debug, Default)]
pub struct FitOptions {
    /// Hold item parameters at these values (no item or branch updates).
    pub fixed_items: Option<Vec<ItemParams>>,
    /// Sweeps between progress lines when `control.verbose` is set; 0 picks
    /// a twentieth of the run.
    pub progress_every: usize,
}

/// A single Markov chain over the full augmented state.
pub struct Chain {
    data: ModelData,
    hyper: Hyperparams,
    control: ControlParams,
    dynamic: bool,
    ident: Identification,
    opts: FitOptions,
    state: ChainState,
    iteration: usize,
    moves: MoveCounts,
    rho_moves: (u64, u64),
    block_moves: (u64, u64),
    reflect_moves: (u64, u64),
    ref_violations: Vec<u64>,
}

impl Chain {
    pub fn new(
        data: ModelData,
        hyper: Hyperparams,
        control: ControlParams,
        dynamic: bool,
        ident: Identification,
        opts: FitOptions,
    ) -> Result<Self> {
        hyper.validate()?;
        control.validate()?;
        let ident = match ident {
            Identification::Static(i) if i >= data.n_leg => {
                return Err(PumError::UnknownLegislator(format!("index {i} out of range")));
            }
            Identification::Dynamic(refs) => Identification::Dynamic(refs.resolve(&data)?),
            other => other,
        };
        let n_refs = match &ident {
            Identification::Dynamic(r) => r.pos.len() + r.neg.len(),
            _ => 0,
        };
        let mut state = ChainState::initialize(&data, &hyper, control.seed, hyper.rho_mean);
        if let Some(fixed) = &opts.fixed_items {
            if fixed.len() != data.n_item || !fixed.iter().all(ItemParams::is_valid) {
                return Err(PumError::InvalidParameter("fixed items must be valid, one per column".into()));
            }
            state.items = fixed.clone();
            let root = SweepRng::new(control.seed, 0);
            state.ystar = (0..data.n_item)
                .map(|j| state.exact_ystar(&data, j, &mut root.stream(StreamKind::Ystar, j)))
                .collect();
        }
        Ok(Self {
            data,
            hyper,
            control,
            dynamic,
            ident,
            opts,
            state,
            iteration: 0,
            moves: MoveCounts::default(),
            rho_moves: (0, 0),
            block_moves: (0, 0),
            reflect_moves: (0, 0),
            ref_violations: vec![0; n_refs],
        })
    }

    pub fn data(&self) -> &ModelData {
        &self.data
    }

    pub fn state(&self) -> &ChainState {
        &self.state
    }

    pub fn state_mut(&mut self) -> &mut ChainState {
        &mut self.state
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// Advance one full sweep: latent triples, ideal points, items, branch
    /// moves and (dynamic only) rho.
    pub fn sweep(&mut self) {
        self.iteration += 1;
        let r = SweepRng::new(self.control.seed, self.iteration as u64);
        gibbs_ystar(&self.data, &mut self.state, r);
        if self.dynamic {
            ffbs_beta(&self.data, &mut self.state, r);
        } else {
            gibbs_beta(&self.data, &mut self.state, &self.hyper, r);
        }
        let (acc, n) = mh_leg_reflections(&self.data, &mut self.state, &self.hyper, self.dynamic, r);
        self.reflect_moves.0 += acc;
        self.reflect_moves.1 += n;
        if self.opts.fixed_items.is_none() {
            gibbs_item(&self.data, &mut self.state, &self.hyper, r);
            let c = mh_z_moves(&self.data, &mut self.state, &self.hyper, self.control.flip_rate, r);
            self.moves.flip_attempted += c.flip_attempted;
            self.moves.flip_accepted += c.flip_accepted;
            self.moves.redraw_attempted += c.redraw_attempted;
            self.moves.redraw_accepted += c.redraw_accepted;
            if self.dynamic && self.data.n_terms > 1 {
                let mut rng = r.stream(StreamKind::Block, 0);
                let (acc, n) = mh_term_blocks(&self.data, &mut self.state, &self.hyper, self.data.n_terms, &mut rng);
                self.block_moves.0 += acc;
                self.block_moves.1 += n;
            }
        }
        if self.dynamic {
            let mut rng = r.stream(StreamKind::Rho, 0);
            let acc = mh_rho(&self.data, &mut self.state, &self.hyper, self.control.sd_prop_rho, &mut rng);
            self.rho_moves.0 += acc as u64;
            self.rho_moves.1 += 1;
        }
    }

    /// Replace every observed vote by a fresh draw from the model at the
    /// current parameters, drawing the latent triples jointly with it.
    /// Used by joint-distribution tests.
    pub fn resimulate_votes(&mut self, stream: u64) {
        let r = SweepRng::new(self.control.seed ^ stream.rotate_left(17), self.iteration as u64);
        for j in 0..self.data.n_item {
            let mut rng = r.stream(StreamKind::Data, j);
            let item = self.state.items[j];
            let t = self.data.item_term[j];
            let nt = self.data.n_terms;
            for (o, y) in self.data.by_item[j].iter_mut().zip(self.state.ystar[j].iter_mut()) {
                let m = item.latent_means(self.state.beta[o.leg as usize * nt + t]);
                *y = std::array::from_fn(|k| m[k] + rng.sample::<f64, _>(StandardNormal));
                o.yes = y[1] > y[0] && y[1] > y[2];
            }
        }
    }

    /// Whether the current state must be reflected before storage.
    fn needs_reflection(&self) -> bool {
        let beta = &self.state.beta;
        match &self.ident {
            Identification::None => false,
            Identification::Static(i) => beta[self.data.beta_slot(*i, self.data.spans[*i][0])] < 0.0,
            Identification::Dynamic(refs) => {
                if let Some((leg, terms)) = refs.pos.first() {
                    ref_mean(&self.data, beta, *leg, terms) < 0.0
                } else if let Some((leg, terms)) = refs.neg.first() {
                    ref_mean(&self.data, beta, *leg, terms) > 0.0
                } else {
                    false
                }
            }
        }
    }

    /// Identified copy of the current state: ideal points in
    /// `beta_params` order and items.
    pub fn identified_draw(&mut self) -> (Vec<f64>, Vec<ItemParams>) {
        let flip = self.needs_reflection();
        let sign = if flip { -1.0 } else { 1.0 };
        let beta: Vec<f64> = self
            .data
            .beta_params()
            .iter()
            .map(|&(i, t)| sign * self.state.beta[self.data.beta_slot(i, t)])
            .collect();
        let items = if flip {
            self.state.items.iter().map(ItemParams::reflect).collect()
        } else {
            self.state.items.clone()
        };
        if let Identification::Dynamic(refs) = &self.ident {
            let b = &self.state.beta;
            let checks = refs.pos.iter().map(|r| (r, 1.0)).chain(refs.neg.iter().map(|r| (r, -1.0)));
            for (k, ((leg, terms), want)) in checks.enumerate() {
                if sign * want * ref_mean(&self.data, b, *leg, terms) < 0.0 {
                    self.ref_violations[k] += 1;
                }
            }
        }
        (beta, items)
    }

    pub fn layout(&self, votes: &VoteMatrix) -> DrawLayout {
        DrawLayout {
            leg_labels: votes.row_labels().to_vec(),
            item_labels: votes.col_labels().to_vec(),
            terms: if self.dynamic {
                Some(votes.term_index().map(|t| t.terms).unwrap_or_else(|| vec!["1".into()]))
            } else {
                None
            },
            item_term: self.data.item_term.clone(),
            beta_params: self.data.beta_params(),
        }
    }

    /// Run all remaining sweeps, passing stored draws to `sink`.
    pub fn run(&mut self, votes: &VoteMatrix, sink: &mut dyn DrawSink) -> Result<RunInfo> {
        let start = Instant::now();
        let layout = self.layout(votes);
        sink.start(&layout)?;
        let every = match self.opts.progress_every {
            0 => (self.control.num_iter / 20).max(1),
            n => n,
        };
        let mut stored = 0;
        while self.iteration < self.control.num_iter {
            self.sweep();
            if self.control.is_stored(self.iteration) {
                let (beta, items) = self.identified_draw();
                let rho = self.dynamic.then_some(self.state.rho);
                sink.record(&Draw { iteration: self.iteration, beta: &beta, items: &items, rho })?;
                stored += 1;
            }
            if self.control.verbose && self.iteration % every == 0 {
                eprintln!(
                    "sweep {}/{} ({:.1}s)",
                    self.iteration,
                    self.control.num_iter,
                    start.elapsed().as_secs_f64()
                );
            }
        }
        let info = RunInfo {
            model: if self.dynamic { "dynamic" } else { "static" }.into(),
            hyper: self.hyper.clone(),
            control: self.control.clone(),
            n_draws: stored,
            acceptance: Acceptance::from_counts(
                &self.moves,
                self.dynamic.then_some(self.rho_moves),
                (self.dynamic && self.opts.fixed_items.is_none()).then_some(self.block_moves),
                self.reflect_moves,
            ),
            warnings: self.warnings(&layout, stored),
            wall_seconds: start.elapsed().as_secs_f64(),
        };
        sink.finish(&info)?;
        Ok(info)
    }

    fn warnings(&self, layout: &DrawLayout, stored: usize) -> Vec<String> {
        let Identification::Dynamic(refs) = &self.ident else {
            return Vec::new();
        };
        let kinds = refs.pos.iter().map(|r| (r.0, "positive")).chain(refs.neg.iter().map(|r| (r.0, "negative")));
        kinds
            .zip(&self.ref_violations)
            .filter(|(_, &n)| n > 0)
            .map(|((leg, kind), n)| {
                format!(
                    "{kind} reference {:?} had the opposite sign in {n} of {stored} stored draws",
                    layout.leg_labels[leg]
                )
            })
            .collect()
    }
}

/// Fit the static model. `pos_leg` is the row whose ideal point is kept
/// non-negative in every stored draw.
pub fn fit_static(
    votes: &VoteMatrix,
    hyper: &Hyperparams,
    control: &ControlParams,
    pos_leg: usize,
) -> Result<PosteriorSamples> {
    fit_static_with(votes, hyper, control, Identification::Static(pos_leg), FitOptions::default())
}

pub fn fit_static_with(
    votes: &VoteMatrix,
    hyper: &Hyperparams,
    control: &ControlParams,
    ident: Identification,
    opts: FitOptions,
) -> Result<PosteriorSamples> {
    let mut sink = MemorySink::new();
    let data = ModelData::new_static(votes)?;
    let mut chain = Chain::new(data, hyper.clone(), control.clone(), false, ident, opts)?;
    chain.run(votes, &mut sink)?;
    sink.into_samples()
}

/// Fit the dynamic model; `votes` must carry a time index.
pub fn fit_dynamic(
    votes: &VoteMatrix,
    hyper: &Hyperparams,
    control: &ControlParams,
    refs: &SignRefs,
) -> Result<PosteriorSamples> {
    let mut sink = MemorySink::new();
    let data = ModelData::new_dynamic(votes)?;
    let ident = Identification::Dynamic(refs.clone());
    let mut chain = Chain::new(data, hyper.clone(), control.clone(), true, ident, FitOptions::default())?;
    chain.run(votes, &mut sink)?;
    sink.into_samples()
}
