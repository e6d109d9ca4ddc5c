use ndarray::{Array2, Array3};
use serde::{Deserialize, Serialize};

use super::steps::MoveCounts;
use crate::error::{PumError, Result};
use crate::model::{Branch, ControlParams, Hyperparams, ItemParams};

/// Names and shapes shared by every stored draw.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrawLayout {
    pub leg_labels: Vec<String>,
    pub item_labels: Vec<String>,
    /// Sorted term labels (dynamic models only).
    pub terms: Option<Vec<String>>,
    pub item_term: Vec<usize>,
    /// `(legislator, term)` of every stored ideal point.
    pub beta_params: Vec<(usize, usize)>,
}

impl DrawLayout {
    pub fn n_leg(&self) -> usize {
        self.leg_labels.len()
    }

    pub fn n_item(&self) -> usize {
        self.item_labels.len()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.as_ref().map_or(1, Vec::len)
    }

    pub fn is_dynamic(&self) -> bool {
        self.terms.is_some()
    }

    /// `beta:<legislator>` or `beta:<legislator>@<term>` style names,
    /// without the prefix.
    pub fn beta_labels(&self) -> Vec<String> {
        self.beta_params
            .iter()
            .map(|&(i, t)| match &self.terms {
                Some(terms) => format!("{}@{}", self.leg_labels[i], terms[t]),
                None => self.leg_labels[i].clone(),
            })
            .collect()
    }

    /// Column of `beta[i, t]` among the stored ideal points, if it exists.
    pub fn beta_lookup(&self) -> Vec<Option<usize>> {
        let nt = self.n_terms();
        let mut out = vec![None; self.n_leg() * nt];
        for (k, &(i, t)) in self.beta_params.iter().enumerate() {
            out[i * nt + t] = Some(k);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub accepted: u64,
    pub attempted: u64,
    pub rate: Option<f64>,
}

impl Rate {
    pub fn new(accepted: u64, attempted: u64) -> Self {
        let rate = (attempted > 0).then(|| accepted as f64 / attempted as f64);
        Self { accepted, attempted, rate }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Acceptance {
    pub flip: Rate,
    pub prior_redraw: Rate,
    pub rho: Option<Rate>,
    /// Shifts, rescalings and reflections of a block of consecutive terms
    /// (dynamic fits).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub term_block: Option<Rate>,
    /// Reflections of single legislators through zero.
    #[serde(default)]
    pub leg_reflect: Rate,
}

impl Acceptance {
    pub(crate) fn from_counts(c: &MoveCounts, rho: Option<(u64, u64)>, block: Option<(u64, u64)>, reflect: (u64, u64)) -> Self {
        Self {
            flip: Rate::new(c.flip_accepted, c.flip_attempted),
            prior_redraw: Rate::new(c.redraw_accepted, c.redraw_attempted),
            rho: rho.map(|(a, n)| Rate::new(a, n)),
            term_block: block.map(|(a, n)| Rate::new(a, n)),
            leg_reflect: Rate::new(reflect.0, reflect.1),
        }
    }
}

/// Run metadata emitted alongside the draws.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub model: String,
    pub hyper: Hyperparams,
    pub control: ControlParams,
    pub n_draws: usize,
    pub acceptance: Acceptance,
    pub warnings: Vec<String>,
    pub wall_seconds: f64,
}

/// One stored state after identification.
pub struct Draw<'a> {
    pub iteration: usize,
    /// Values in `DrawLayout::beta_params` order.
    pub beta: &'a [f64],
    pub items: &'a [ItemParams],
    pub rho: Option<f64>,
}

/// Receiver of stored draws, so long runs can stream to disk.
pub trait DrawSink {
    fn start(&mut self, layout: &DrawLayout) -> Result<()>;
    fn record(&mut self, draw: &Draw<'_>) -> Result<()>;
    fn finish(&mut self, _info: &RunInfo) -> Result<()> {
        Ok(())
    }
}

/// Stored chain output. Arrays are draws-major: `beta` is `S x P` over
/// `layout.beta_params`, `alpha`/`delta` are `S x J x 2`, `z` is `S x J`
/// with entries +-1. Memory is `8 S (P + 4J) + S J` bytes plus `rho`.
#[derive(Clone, Debug, PartialEq)]
pub struct PosteriorSamples {
    pub layout: DrawLayout,
    pub beta: Array2<f64>,
    pub alpha: Array3<f64>,
    pub delta: Array3<f64>,
    pub z: Array2<i8>,
    pub rho: Option<Vec<f64>>,
    pub info: Option<RunInfo>,
}

impl PosteriorSamples {
    pub fn new(
        layout: DrawLayout,
        beta: Array2<f64>,
        alpha: Array3<f64>,
        delta: Array3<f64>,
        z: Array2<i8>,
        rho: Option<Vec<f64>>,
    ) -> Result<Self> {
        let s = beta.nrows();
        let j = layout.n_item();
        let ok = beta.ncols() == layout.beta_params.len()
            && alpha.dim() == (s, j, 2)
            && delta.dim() == (s, j, 2)
            && z.dim() == (s, j)
            && rho.as_ref().is_none_or(|r| r.len() == s);
        if !ok {
            return Err(PumError::DimensionMismatch("posterior sample blocks disagree in shape".into()));
        }
        if z.iter().any(|&v| v != 1 && v != -1) {
            return Err(PumError::InvalidData("z draws must be +1 or -1".into()));
        }
        Ok(Self { layout, beta, alpha, delta, z, rho, info: None })
    }

    pub fn n_draws(&self) -> usize {
        self.beta.nrows()
    }

    pub fn item(&self, s: usize, j: usize) -> ItemParams {
        ItemParams::new(
            [self.alpha[[s, j, 0]], self.alpha[[s, j, 1]]],
            [self.delta[[s, j, 0]], self.delta[[s, j, 1]]],
            if self.z[[s, j]] > 0 { Branch::Pos } else { Branch::Neg },
        )
    }

    /// Draws of the static ideal point of every legislator, `S x I`.
    pub fn static_beta(&self) -> Result<Array2<f64>> {
        if self.layout.is_dynamic() {
            return Err(PumError::InvalidData("samples come from a dynamic model".into()));
        }
        Ok(self.beta.clone())
    }
}

/// Collects draws in memory.
#[derive(Default)]
pub struct MemorySink {
    layout: Option<DrawLayout>,
    beta: Vec<f64>,
    alpha: Vec<f64>,
    delta: Vec<f64>,
    z: Vec<i8>,
    rho: Vec<f64>,
    n: usize,
    info: Option<RunInfo>,
}

impl MemorySink {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn into_samples(self) -> Result<PosteriorSamples> {
        let layout = self
            .layout
            .ok_or_else(|| PumError::NotEnoughDraws("sink was never started".into()))?;
        let (s, p, j) = (self.n, layout.beta_params.len(), layout.n_item());
        let rho = layout.is_dynamic().then_some(self.rho);
        let mut out = PosteriorSamples::new(
            layout,
            Array2::from_shape_vec((s, p), self.beta).expect("row lengths fixed"),
            Array3::from_shape_vec((s, j, 2), self.alpha).expect("row lengths fixed"),
            Array3::from_shape_vec((s, j, 2), self.delta).expect("row lengths fixed"),
            Array2::from_shape_vec((s, j), self.z).expect("row lengths fixed"),
            rho,
        )?;
        out.info = self.info;
        Ok(out)
    }
}

impl DrawSink for MemorySink {
    fn start(&mut self, layout: &DrawLayout) -> Result<()> {
        self.layout = Some(layout.clone());
        Ok(())
    }

    fn record(&mut self, draw: &Draw<'_>) -> Result<()> {
        self.beta.extend_from_slice(draw.beta);
        for it in draw.items {
            self.alpha.extend_from_slice(&it.alpha);
            self.delta.extend_from_slice(&it.delta);
            self.z.push(it.z.as_i8());
        }
        if let Some(r) = draw.rho {
            self.rho.push(r);
        }
        self.n += 1;
        Ok(())
    }

    fn finish(&mut self, info: &RunInfo) -> Result<()> {
        self.info = Some(info.clone());
        Ok(())
    }
}
