use serde::{Deserialize, Serialize};

use crate::error::{PumError, Result};

/// Prior constants. Scales are standard deviations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Hyperparams {
    pub beta_mean: f64,
    pub beta_var: f64,
    pub alpha_mean: [f64; 2],
    pub alpha_scale: f64,
    pub delta_mean: [f64; 2],
    pub delta_scale: f64,
    pub rho_mean: f64,
    pub rho_sigma: f64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Self {
            beta_mean: 0.0,
            beta_var: 1.0,
            alpha_mean: [0.0, 0.0],
            alpha_scale: 5.0,
            delta_mean: [-2.0, 10.0],
            delta_scale: 10f64.sqrt(),
            rho_mean: 0.9,
            rho_sigma: 0.04,
        }
    }
}

impl Hyperparams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("beta_var", self.beta_var),
            ("alpha_scale", self.alpha_scale),
            ("delta_scale", self.delta_scale),
            ("rho_sigma", self.rho_sigma),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(PumError::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.rho_mean > 0.0 && self.rho_mean < 1.0) {
            return Err(PumError::InvalidParameter(format!(
                "rho_mean must lie in (0, 1), got {}",
                self.rho_mean
            )));
        }
        let finite = [self.beta_mean, self.alpha_mean[0], self.alpha_mean[1], self.delta_mean[0], self.delta_mean[1]];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(PumError::InvalidParameter("prior means must be finite".into()));
        }
        Ok(())
    }
}

/// Run controls for the samplers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ControlParams {
    pub num_iter: usize,
    pub burn_in: usize,
    pub keep_iter: usize,
    pub flip_rate: f64,
    pub sd_prop_rho: f64,
    pub seed: u64,
    pub verbose: bool,
}

impl Default for ControlParams {
    fn default() -> Self {
        Self {
            num_iter: 400_000,
            burn_in: 200_000,
            keep_iter: 10,
            flip_rate: 0.1,
            sd_prop_rho: 0.1,
            seed: 1,
            verbose: false,
        }
    }
}

impl ControlParams {
    pub fn validate(&self) -> Result<()> {
        if self.num_iter == 0 || self.keep_iter == 0 {
            return Err(PumError::InvalidControl("num_iter and keep_iter must be positive".into()));
        }
        if self.burn_in >= self.num_iter {
            return Err(PumError::InvalidControl(format!(
                "burn_in ({}) must be smaller than num_iter ({})",
                self.burn_in, self.num_iter
            )));
        }
        if !(0.0..=1.0).contains(&self.flip_rate) {
            return Err(PumError::InvalidControl(format!(
                "flip_rate must lie in [0, 1], got {}",
                self.flip_rate
            )));
        }
        if !(self.sd_prop_rho > 0.0 && self.sd_prop_rho.is_finite()) {
            return Err(PumError::InvalidControl(format!(
                "sd_prop_rho must be positive, got {}",
                self.sd_prop_rho
            )));
        }
        Ok(())
    }

    /// Number of stored draws: iterations `t > burn_in` with
    /// `(t - burn_in) % keep_iter == 0`.
    pub fn n_stored(&self) -> usize {
        (self.num_iter - self.burn_in) / self.keep_iter
    }

    pub fn is_stored(&self, iteration: usize) -> bool {
        iteration > self.burn_in && (iteration - self.burn_in) % self.keep_iter == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        Hyperparams::default().validate().unwrap();
        ControlParams::default().validate().unwrap();
        assert_eq!(ControlParams::default().n_stored(), 20_000);
    }

    #[test]
    fn bad_controls_rejected() {
        let mut c = ControlParams { burn_in: 10, num_iter: 10, ..Default::default() };
        assert!(c.validate().is_err());
        c.num_iter = 11;
        c.flip_rate = 1.5;
        assert!(c.validate().is_err());
        let h = Hyperparams { rho_mean: 1.0, ..Default::default() };
        assert!(h.validate().is_err());
    }

    #[test]
    fn storage_rule_counts() {
        let c = ControlParams { num_iter: 105, burn_in: 50, keep_iter: 10, ..Default::default() };
        let stored = (1..=c.num_iter).filter(|&t| c.is_stored(t)).count();
        assert_eq!(stored, c.n_stored());
        assert_eq!(stored, 5);
    }
}
