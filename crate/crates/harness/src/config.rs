//! Experiment configuration: a JSON file describing which worlds to
//! build, which selection rules to run on them, and at which sample
//! sizes. One config is one reproducible batch.

use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use prlab_core::{LearnerSpec, WorldSpec};

pub const SCHEMA_VERSION: u32 = 1;

fn default_mc_inputs() -> usize {
    100_000
}

/// Monte Carlo settings for worlds without exact expectations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalConfig {
    #[serde(default = "default_mc_inputs")]
    pub mc_inputs: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { mc_inputs: default_mc_inputs() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub id: String,
    pub world: WorldSpec,
    pub learners: Vec<LearnerSpec>,
    /// Training-set sizes to sweep, strictly increasing.
    pub m_schedule: Vec<usize>,
    pub trials: usize,
    #[serde(default)]
    pub eval: EvalConfig,
    /// When set, the summary reports the fraction of trials whose scalar
    /// loss is at most this value, with a Wilson 95% interval.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub success_epsilon: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Config {
    pub schema_version: u32,
    /// Root seed; every trial derives its own streams from it.
    pub seed: u64,
    pub experiments: Vec<ExperimentConfig>,
}

impl Config {
    pub fn from_str(text: &str) -> anyhow::Result<Self> {
        let cfg: Config = serde_json::from_str(text).context("parsing config JSON")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::from_str(&text)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            bail!(
                "unsupported schema_version {} (expected {})",
                self.schema_version,
                SCHEMA_VERSION
            );
        }
        if self.experiments.is_empty() {
            bail!("config has no experiments");
        }
        let mut ids = std::collections::BTreeSet::new();
        for exp in &self.experiments {
            if !ids.insert(exp.id.as_str()) {
                bail!("duplicate experiment id `{}`", exp.id);
            }
            if exp.id.is_empty() || exp.id.contains(',') {
                bail!("experiment id `{}` must be non-empty and comma-free", exp.id);
            }
            if exp.learners.is_empty() {
                bail!("experiment `{}` has no learners", exp.id);
            }
            let mut names = std::collections::BTreeSet::new();
            for l in &exp.learners {
                if !names.insert(l.name()) {
                    bail!("experiment `{}` lists `{}` twice", exp.id, l.name());
                }
            }
            if exp.m_schedule.is_empty() {
                bail!("experiment `{}` has an empty m_schedule", exp.id);
            }
            if !exp.m_schedule.windows(2).all(|w| w[0] < w[1]) || exp.m_schedule[0] == 0 {
                bail!("experiment `{}` needs a strictly increasing m_schedule of positive sizes", exp.id);
            }
            if exp.trials == 0 {
                bail!("experiment `{}` needs at least one trial", exp.id);
            }
            if exp.eval.mc_inputs == 0 {
                bail!("experiment `{}` needs mc_inputs >= 1", exp.id);
            }
            if let Some(eps) = exp.success_epsilon {
                if !(eps > 0.0 && eps <= 1.0) {
                    bail!("experiment `{}` needs success_epsilon in (0, 1]", exp.id);
                }
            }
        }
        Ok(())
    }
}
