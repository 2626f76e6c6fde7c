// SPDX-License-Identifier: Apache-2.0
//! Run manifests: everything needed to repeat a run with the same binary.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{CliError, CliResult};

pub const MANIFEST_FORMAT: &str = "ergmk-manifest/1";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: String,
    pub tool_version: String,
    pub command: String,
    pub config_path: String,
    pub output_dir: String,
    pub seed: u64,
    /// Resolved config with absolute file references and the effective
    /// seed.
    pub config: String,
}

impl Manifest {
    pub fn new(command: &str, config_path: &Path, output_dir: &Path, config: &Config) -> Self {
        Manifest {
            format_version: MANIFEST_FORMAT.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config_path: config_path.to_string_lossy().into_owned(),
            output_dir: output_dir.to_string_lossy().into_owned(),
            seed: config.sim.seed,
            config: config.to_toml(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }

    pub fn parse(text: &str) -> CliResult<Manifest> {
        let m: Manifest = serde_json::from_str(text).map_err(|e| CliError::Config(format!("bad manifest: {e}")))?;
        if m.format_version != MANIFEST_FORMAT {
            return Err(CliError::Config(format!("unsupported manifest format `{}`", m.format_version)));
        }
        Ok(m)
    }
}

/// Loads either a TOML config or a manifest written by an earlier run.
pub fn load_config(path: &Path) -> CliResult<Config> {
    if path.extension().is_some_and(|e| e == "json") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Config::parse(&Manifest::parse(&text)?.config)
    } else {
        Config::load(path)
    }
}
