//! Run configuration: defaults, an optional `key = value` file, then flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    /// Slack allowed on numeric upper-bound checks.
    pub numeric_tol: f64,
    /// Stopping tolerance for projected gradient ascent.
    pub gradient_tol: f64,
    /// Largest graph checked for sparsity by brute force; larger ones use the min cut.
    pub brute_vertices: usize,
    pub grid_steps: usize,
    pub restarts: usize,
    pub samples: usize,
    pub max_attempts: usize,
    pub output_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            numeric_tol: 1e-9,
            gradient_tol: 1e-6,
            brute_vertices: 12,
            grid_steps: 300,
            restarts: 200,
            samples: 100_000,
            max_attempts: 10_000,
            output_dir: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let config: RunConfig = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.numeric_tol > 0.0 && self.gradient_tol > 0.0) {
            bail!("tolerances must be positive");
        }
        if self.brute_vertices == 0 || self.grid_steps == 0 || self.samples == 0 || self.max_attempts == 0 {
            bail!("caps must be at least 1");
        }
        if self.brute_vertices > 24 {
            bail!("brute_vertices = {} is above 24", self.brute_vertices);
        }
        Ok(())
    }

    /// `path` under `output_dir` when it is relative and a directory is set.
    pub fn output_path(&self, path: &Path) -> PathBuf {
        match &self.output_dir {
            Some(dir) if path.is_relative() => dir.join(path),
            _ => path.to_path_buf(),
        }
    }
}
