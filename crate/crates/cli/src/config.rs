//! Batch configuration.
//!
//! Defaults are desk-scale: a 5×10⁴-tick horizon instead of the five simulated
//! days of the reference experiments, with the same delay parameters.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use patrol_core::environment::{geometric_environment, random_environment};
use patrol_core::generator::{DEFAULT_GAMMA, DEFAULT_LAMBDA};
use patrol_core::verify::EpsilonMode;
use patrol_core::{load_environment, CostSpec, Environment, Norm, Scale, Tick};
use serde::{Deserialize, Serialize};

/// Where the graph comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EnvironmentSource {
    /// Path to an environment document, relative to the config file.
    File(PathBuf),
    Generated(GeneratedEnvironment),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratedEnvironment {
    Random {
        nodes: usize,
        degree: f64,
        w_min: u64,
        w_max: u64,
        seed: u64,
    },
    Geometric {
        nodes: usize,
        degree: f64,
        extent: f64,
        seed: u64,
    },
}

/// Start nodes: an explicit list (its length fixes the agent count), or
/// drawn from each scenario's seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartPolicy {
    Explicit(Vec<String>),
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    /// Maximum idleness.
    Gmi,
    /// Mean idleness.
    Gai,
    /// Maximum of `phi`-weighted idleness.
    WeightedMax,
    /// Sum of `phi`-weighted idleness.
    WeightedL1,
    /// Euclidean norm of `phi`-weighted idleness.
    WeightedL2,
}

impl Metric {
    pub fn cost_spec(self) -> CostSpec {
        let weighted = |norm| CostSpec {
            norm,
            use_phi: true,
            scale: Scale::Unit,
        };
        match self {
            Metric::Gmi => CostSpec::GMI,
            Metric::Gai => CostSpec::GAI,
            Metric::WeightedMax => CostSpec::WEIGHTED_MAX,
            Metric::WeightedL1 => weighted(Norm::L1),
            Metric::WeightedL2 => weighted(Norm::L2),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Gmi => "gmi",
            Metric::Gai => "gai",
            Metric::WeightedMax => "weighted-max",
            Metric::WeightedL1 => "weighted-l1",
            Metric::WeightedL2 => "weighted-l2",
        }
    }

    pub fn parse(s: &str) -> Option<Metric> {
        [
            Metric::Gmi,
            Metric::Gai,
            Metric::WeightedMax,
            Metric::WeightedL1,
            Metric::WeightedL2,
        ]
        .into_iter()
        .find(|m| m.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Label for the `layout` column; defaults to the environment file stem.
    pub layout: Option<String>,
    pub environment: Option<EnvironmentSource>,
    /// One batch entry per agent count.
    pub agents: Vec<usize>,
    pub starts: StartPolicy,
    pub horizon: u64,
    #[serde(rename = "D")]
    pub d_values: Vec<u64>,
    pub metrics: Vec<Metric>,
    pub gamma: f64,
    pub lambda: f64,
    pub seed: u64,
    /// Mode of the epsilon in the results table; theorem checks always use
    /// the lemma3 mode.
    pub epsilon_mode: EpsilonMode,
    /// The recurrence search doubles the horizon up to this multiple.
    pub horizon_cap: u64,
    pub output: PathBuf,
    /// Also write each scenario's strategies under `output/scenarios/`.
    pub keep_artifacts: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            layout: None,
            environment: None,
            agents: vec![5],
            starts: StartPolicy::Random,
            horizon: 50_000,
            d_values: vec![1, 2, 3, 4, 5],
            metrics: vec![Metric::Gmi, Metric::Gai],
            gamma: DEFAULT_GAMMA,
            lambda: DEFAULT_LAMBDA,
            seed: 0,
            epsilon_mode: EpsilonMode::Experiment,
            horizon_cap: 16,
            output: PathBuf::from("out"),
            keep_artifacts: false,
        }
    }
}

impl ScenarioConfig {
    /// Reads a config file; relative environment paths are resolved against
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg: ScenarioConfig =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if let Some(EnvironmentSource::File(p)) = &mut cfg.environment {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn check(&self) -> Result<()> {
        if self.environment.is_none() {
            bail!("no environment given");
        }
        if let StartPolicy::Explicit(starts) = &self.starts {
            if starts.is_empty() {
                bail!("explicit start list is empty");
            }
        } else if self.agents.is_empty() || self.agents.contains(&0) {
            bail!("agent counts must be at least 1");
        }
        if self.d_values.is_empty() || self.d_values.contains(&0) {
            bail!("D values must be at least 1");
        }
        if self.metrics.is_empty() {
            bail!("no metrics given");
        }
        if self.horizon == 0 {
            bail!("horizon must be positive");
        }
        if self.horizon_cap == 0 {
            bail!("horizon cap must be at least 1");
        }
        Ok(())
    }

    /// Agent counts of the batch.
    pub fn agent_counts(&self) -> Vec<usize> {
        match &self.starts {
            StartPolicy::Explicit(starts) => vec![starts.len()],
            StartPolicy::Random => self.agents.clone(),
        }
    }

    pub fn load_environment(&self) -> Result<Environment> {
        match &self.environment {
            None => bail!("no environment given"),
            Some(EnvironmentSource::File(p)) => {
                let f = fs::File::open(p).with_context(|| format!("opening {}", p.display()))?;
                Ok(load_environment(std::io::BufReader::new(f))?)
            }
            Some(EnvironmentSource::Generated(g)) => Ok(match *g {
                GeneratedEnvironment::Random {
                    nodes,
                    degree,
                    w_min,
                    w_max,
                    seed,
                } => random_environment(nodes, degree, (Tick(w_min), Tick(w_max)), seed)?,
                GeneratedEnvironment::Geometric {
                    nodes,
                    degree,
                    extent,
                    seed,
                } => geometric_environment(nodes, degree, extent, seed)?,
            }),
        }
    }

    pub fn layout_name(&self) -> String {
        if let Some(l) = &self.layout {
            return l.clone();
        }
        match &self.environment {
            Some(EnvironmentSource::File(p)) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "environment".into()),
            Some(EnvironmentSource::Generated(GeneratedEnvironment::Random { nodes, .. })) => {
                format!("random{nodes}")
            }
            Some(EnvironmentSource::Generated(GeneratedEnvironment::Geometric { nodes, .. })) => {
                format!("geometric{nodes}")
            }
            None => "environment".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let cfg: ScenarioConfig = serde_json::from_str(
            r#"{"environment": {"kind": "geometric", "nodes": 50, "degree": 2.6, "extent": 400, "seed": 3},
                "agents": [5, 10], "D": [1, 2], "metrics": ["gmi", "weighted-l2"],
                "epsilon_mode": "lemma3", "seed": 9}"#,
        )
        .unwrap();
        assert_eq!(cfg.agents, vec![5, 10]);
        assert_eq!(cfg.metrics, vec![Metric::Gmi, Metric::WeightedL2]);
        assert_eq!(cfg.epsilon_mode, EpsilonMode::Lemma3);
        assert_eq!(cfg.horizon, 50_000);
        assert_eq!(cfg.layout_name(), "geometric50");
        cfg.check().unwrap();
    }

    #[test]
    fn explicit_starts_fix_the_agent_count() {
        let cfg: ScenarioConfig = serde_json::from_str(
            r#"{"environment": "g.json", "starts": {"explicit": ["v1", "v2"]}}"#,
        )
        .unwrap();
        assert_eq!(cfg.agent_counts(), vec![2]);
        assert_eq!(cfg.layout_name(), "g");
    }

    #[test]
    fn rejects_bad_values() {
        let base = ScenarioConfig {
            environment: Some(EnvironmentSource::File("g.json".into())),
            ..ScenarioConfig::default()
        };
        base.check().unwrap();
        for bad in [
            ScenarioConfig { d_values: vec![0], ..base.clone() },
            ScenarioConfig { agents: vec![0], ..base.clone() },
            ScenarioConfig { horizon: 0, ..base.clone() },
            ScenarioConfig { environment: None, ..base.clone() },
        ] {
            assert!(bad.check().is_err());
        }
        assert!(serde_json::from_str::<ScenarioConfig>(r#"{"bogus": 1}"#).is_err());
    }
}
