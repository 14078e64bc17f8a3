//! JSON experiment configuration.
//!
//! Every key is optional and falls back to [`ExperimentConfig::default`];
//! unknown keys are rejected. Overrides of the form `key=value` replace a
//! top-level key before parsing, with `value` read as JSON when it parses and
//! as a plain string otherwise.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use tvar_core::mc::ExperimentConfig;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub coef_ids: Vec<String>,
    pub noise_ids: Vec<String>,
    pub n_grid: Vec<u64>,
    pub replications: u32,
    pub z0: f64,
    pub beta: f64,
    pub gamma: f64,
    pub kernel_id: String,
    pub root_seed: u64,
    pub y0: f64,
    pub sigma_star: f64,
    pub eps: f64,
    pub lan_u: f64,
    pub lan_nu: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        ExperimentConfig::default().into()
    }
}

impl From<ExperimentConfig> for RunConfig {
    fn from(c: ExperimentConfig) -> Self {
        Self {
            coef_ids: c.coef_ids,
            noise_ids: c.noise_ids,
            n_grid: c.n_grid,
            replications: c.replications,
            z0: c.z0,
            beta: c.beta,
            gamma: c.gamma,
            kernel_id: c.kernel_id,
            root_seed: c.root_seed,
            y0: c.y0,
            sigma_star: c.sigma_star,
            eps: c.eps,
            lan_u: c.lan_u,
            lan_nu: c.lan_nu,
        }
    }
}

impl From<RunConfig> for ExperimentConfig {
    fn from(c: RunConfig) -> Self {
        Self {
            coef_ids: c.coef_ids,
            noise_ids: c.noise_ids,
            n_grid: c.n_grid,
            replications: c.replications,
            z0: c.z0,
            beta: c.beta,
            gamma: c.gamma,
            kernel_id: c.kernel_id,
            root_seed: c.root_seed,
            y0: c.y0,
            sigma_star: c.sigma_star,
            eps: c.eps,
            lan_u: c.lan_u,
            lan_nu: c.lan_nu,
        }
    }
}

impl RunConfig {
    /// Parses a JSON object, applies `overrides`, and rejects unknown keys.
    pub fn from_json(text: &str, overrides: &[String]) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("config: {e}")))?;
        let Value::Object(mut map) = value else {
            return Err(Error::invalid("config: expected a JSON object"));
        };
        apply_overrides(&mut map, overrides)?;
        serde_json::from_value(Value::Object(map))
            .map_err(|e| Error::invalid(format!("config: {e}")))
    }

    /// Reads `path` (or starts from the defaults when `None`).
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p).map_err(Error::io(p))?,
            None => "{}".to_string(),
        };
        Self::from_json(&text, overrides)
    }

    pub fn experiment(&self) -> ExperimentConfig {
        self.clone().into()
    }

    /// Runs every check of [`ExperimentConfig::validate`].
    pub fn validate(&self) -> Result<()> {
        self.experiment().validate().map_err(Error::invalid)
    }

    /// Compact JSON with fields in declaration order.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Hex SHA-256 of [`RunConfig::canonical_json`].
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}

fn apply_overrides(map: &mut Map<String, Value>, overrides: &[String]) -> Result<()> {
    for o in overrides {
        let (key, raw) = o
            .split_once('=')
            .ok_or_else(|| Error::invalid(format!("override `{o}`: expected key=value")))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::invalid(format!("override `{o}`: empty key")));
        }
        let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
        map.insert(key.to_string(), value);
    }
    Ok(())
}
