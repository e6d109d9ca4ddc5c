use std::path::Path;

use pum::io::{KhLayout, PreprocessControl};
use pum::model::{ControlParams, Hyperparams};
use serde::{Deserialize, Serialize};

use crate::args::{ControlArgs, HyperArgs};
use crate::error::{CliError, CliResult};

/// Settings file. Every block is optional; missing fields take defaults.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub hyper: Hyperparams,
    pub control: ControlParams,
    pub preprocess: PreprocessControl,
    pub layout: KhLayout,
}

impl ConfigFile {
    /// Read a config file, or the `config` block of a run manifest.
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let value = match value.get("config") {
            Some(inner) => inner.clone(),
            None => value,
        };
        serde_json::from_value(value).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }
}

pub fn parse_pair(s: &str, what: &str) -> CliResult<[f64; 2]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => Ok([a, b]),
            _ => Err(CliError::config(format!("{what}: expected two numbers, got {s:?}"))),
        },
        _ => Err(CliError::config(format!("{what}: expected \"a,b\", got {s:?}"))),
    }
}

pub fn apply_hyper(mut h: Hyperparams, a: &HyperArgs) -> CliResult<Hyperparams> {
    if let Some(v) = a.beta_mean {
        h.beta_mean = v;
    }
    if let Some(v) = a.beta_var {
        h.beta_var = v;
    }
    if let Some(s) = &a.alpha_mean {
        h.alpha_mean = parse_pair(s, "--alpha-mean")?;
    }
    if let Some(v) = a.alpha_scale {
        h.alpha_scale = v;
    }
    if let Some(s) = &a.delta_mean {
        h.delta_mean = parse_pair(s, "--delta-mean")?;
    }
    if let Some(v) = a.delta_scale {
        h.delta_scale = v;
    }
    if let Some(v) = a.rho_mean {
        h.rho_mean = v;
    }
    if let Some(v) = a.rho_sigma {
        h.rho_sigma = v;
    }
    h.validate()?;
    Ok(h)
}

pub fn apply_control(mut c: ControlParams, a: &ControlArgs) -> CliResult<ControlParams> {
    if let Some(v) = a.num_iter {
        c.num_iter = v;
    }
    if let Some(v) = a.burn_in {
        c.burn_in = v;
    }
    if let Some(v) = a.keep {
        c.keep_iter = v;
    }
    if let Some(v) = a.flip_rate {
        c.flip_rate = v;
    }
    if let Some(v) = a.sd_prop_rho {
        c.sd_prop_rho = v;
    }
    if let Some(v) = a.seed {
        c.seed = v;
    }
    c.verbose |= a.verbose;
    c.validate()?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config_over_defaults() {
        let file: ConfigFile =
            serde_json::from_str(r#"{"hyper": {"alpha_scale": 2.0, "delta_scale": 1.5}}"#).unwrap();
        let args = HyperArgs { alpha_scale: Some(3.0), delta_mean: Some("-1,1".into()), ..Default::default() };
        let h = apply_hyper(file.hyper, &args).unwrap();
        assert_eq!(h.alpha_scale, 3.0);
        assert_eq!(h.delta_scale, 1.5);
        assert_eq!(h.delta_mean, [-1.0, 1.0]);
        assert_eq!(h.rho_mean, 0.9);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<ConfigFile>(r#"{"hyperr": {}}"#).is_err());
        assert!(parse_pair("1;2", "x").is_err());
    }
}
