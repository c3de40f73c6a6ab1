use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::RuleVariant;
use crate::graph::GraphSpec;
use crate::strategy::{StrategyConfig, StrategyRegistry};

/// Inclusive range of palette sizes, written `[lo, hi]` in config files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[u32; 2]", into = "[u32; 2]")]
pub struct KRange {
    lo: u32,
    hi: u32,
}

impl KRange {
    pub fn new(lo: u32, hi: u32) -> Result<Self> {
        if lo == 0 || lo > hi {
            return Err(Error::Config(format!("k_range [{lo}, {hi}] must satisfy 1 <= lo <= hi")));
        }
        Ok(KRange { lo, hi })
    }

    pub fn single(k: u32) -> Result<Self> {
        Self::new(k, k)
    }

    pub fn lo(&self) -> u32 {
        self.lo
    }

    pub fn hi(&self) -> u32 {
        self.hi
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<u32> {
        self.lo..=self.hi
    }
}

impl TryFrom<[u32; 2]> for KRange {
    type Error = Error;

    fn try_from([lo, hi]: [u32; 2]) -> Result<Self> {
        KRange::new(lo, hi)
    }
}

impl From<KRange> for [u32; 2] {
    fn from(r: KRange) -> [u32; 2] {
        [r.lo, r.hi]
    }
}

fn default_quantile() -> f64 {
    0.5
}

/// A batch of games: every `k` in `k_range` times every trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graph: GraphSpec,
    pub k_range: KRange,
    #[serde(default)]
    pub variant: RuleVariant,
    pub trials: usize,
    pub max_rounds: u32,
    #[serde(default)]
    pub master_seed: u64,
    /// Output directory for `trials.csv` and `summary.json`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Play every trial on one graph instead of a fresh draw per trial.
    #[serde(default)]
    pub shared_graph: bool,
    /// Alice survival fraction that defines the threshold.
    #[serde(default = "default_quantile")]
    pub threshold_quantile: f64,
    pub alice: StrategyConfig,
    pub bob: StrategyConfig,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.max_rounds == 0 {
            return Err(Error::Config("max_rounds must be at least 1".into()));
        }
        if !(self.threshold_quantile > 0.0 && self.threshold_quantile <= 1.0) {
            return Err(Error::Config(format!("threshold_quantile {} not in (0, 1]", self.threshold_quantile)));
        }
        let reg = StrategyRegistry::with_defaults();
        for s in [&self.alice, &self.bob] {
            if !reg.contains(&s.name) {
                return Err(Error::UnknownStrategy(s.name.clone()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
graph = "gnp:101:0.5"
k_range = [15, 35]
variant = "standard"
trials = 200
max_rounds = 10
master_seed = 7

[alice]
name = "paper-alice"

[bob]
name = "paper-bob-odd"
target = 0

[bob.params]
danger_threshold = 3
"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = ExperimentConfig::from_toml_str(SAMPLE).unwrap();
        assert_eq!(cfg.k_range.iter().count(), 21);
        assert_eq!(cfg.threshold_quantile, 0.5);
        assert!(!cfg.shared_graph);
        assert_eq!(cfg.bob.params.danger_threshold, Some(3));
        let back = ExperimentConfig::from_toml_str(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = SAMPLE.replace("trials = 200", "trials = 0");
        assert!(matches!(ExperimentConfig::from_toml_str(&bad), Err(Error::Config(_))));
        let bad = SAMPLE.replace("[15, 35]", "[35, 15]");
        assert!(matches!(ExperimentConfig::from_toml_str(&bad), Err(Error::Config(_))));
        let bad = SAMPLE.replace("paper-alice", "nobody");
        assert!(matches!(ExperimentConfig::from_toml_str(&bad), Err(Error::UnknownStrategy(_))));
        let bad = SAMPLE.replace("master_seed = 7", "master_seed = 7\ncolour = 1");
        assert!(ExperimentConfig::from_toml_str(&bad).is_err());
    }
}
