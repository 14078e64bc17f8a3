//! `manifest.json`: what was run, with which configuration and inputs, and
//! what it produced. A manifest alone is enough to regenerate its directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    pub config: RunConfig,
    pub config_sha256: String,
    #[serde(default)]
    pub inputs: Vec<FileDigest>,
    /// Output files relative to the output directory, in write order.
    pub outputs: Vec<FileDigest>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn sha256_file(path: &Path) -> Result<String> {
    Ok(sha256_hex(&std::fs::read(path).map_err(Error::io(path))?))
}

impl Manifest {
    pub fn new(subcommand: &str, config: &RunConfig) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: subcommand.to_string(),
            config: config.clone(),
            config_sha256: config.hash(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, out_dir: &Path) -> Result<PathBuf> {
        let path = out_dir.join(MANIFEST_FILE);
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(&path, text).map_err(Error::io(&path))?;
        Ok(path)
    }

    /// Reads a manifest and checks that its hash matches its configuration.
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
        let m: Manifest = serde_json::from_str(&text)
            .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
        if m.config.hash() != m.config_sha256 {
            return Err(Error::invalid(format!(
                "{}: config_sha256 does not match the recorded config",
                path.display()
            )));
        }
        Ok(m)
    }
}
