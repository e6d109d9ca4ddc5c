use ndarray::{Array2, Array3};

use crate::model::ItemParams;
use crate::sampler::{DrawLayout, PosteriorSamples};

pub fn one_cell_samples(beta: &[f64], items: &[ItemParams]) -> PosteriorSamples {
    let s = beta.len();
    let layout = DrawLayout {
        leg_labels: vec!["a".into()],
        item_labels: vec!["v".into()],
        terms: None,
        item_term: vec![0],
        beta_params: vec![(0, 0)],
    };
    PosteriorSamples::new(
        layout,
        Array2::from_shape_vec((s, 1), beta.to_vec()).unwrap(),
        Array3::from_shape_fn((s, 1, 2), |(d, _, c)| items[d].alpha[c]),
        Array3::from_shape_fn((s, 1, 2), |(d, _, c)| items[d].delta[c]),
        Array2::from_shape_fn((s, 1), |(d, _)| items[d].z.as_i8()),
        None,
    )
    .unwrap()
}
