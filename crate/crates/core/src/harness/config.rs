use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::agents::{AgentKind, DqnConfig, PpoConfig};
use crate::episode::EnvConfig;
use crate::error::{Error, Result};
use crate::reward::RewardWeights;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AgentConfig {
    pub kind: AgentKind,
    pub ppo: PpoConfig,
    pub dqn: DqnConfig,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig {
            kind: AgentKind::Ppo,
            ppo: PpoConfig::default(),
            dqn: DqnConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSettings {
    /// Master seed; must fit in a signed 64-bit TOML integer.
    pub seed: u64,
    /// Training episodes.
    pub episodes: u64,
    /// Evaluation rounds per metrics row.
    pub experiments: u64,
    pub out_dir: PathBuf,
    /// Write `checkpoint_<episode>.json` every this many episodes; 0 disables.
    pub checkpoint_interval: u64,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            seed: 0,
            episodes: 15_000,
            experiments: 5_000,
            out_dir: PathBuf::from("runs"),
            checkpoint_interval: 1_000,
        }
    }
}

/// Everything one run needs. An empty file yields the full default setup.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub env: EnvConfig,
    pub reward: RewardWeights,
    pub agent: AgentConfig,
    pub run: RunSettings,
}

fn config_err(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.into(),
        message: message.into(),
    }
}

impl RunConfig {
    /// Parses TOML text; `origin` only labels error messages.
    pub fn from_toml_str(text: &str, origin: &str) -> Result<Self> {
        let de = toml::Deserializer::parse(text).map_err(|e| config_err(origin, e.to_string()))?;
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            config_err(format!("{origin}: {path}"), e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text, &path.display().to_string())
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| config_err("<serialize>", e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_toml_string()?).map_err(|e| Error::io(path, e))
    }

    pub fn validate(&self) -> Result<()> {
        self.env.validate().map_err(|e| match e {
            Error::Config { path, message } => config_err(format!("env.{path}"), message),
            other => other,
        })?;
        let w = &self.reward;
        for (key, v) in [
            ("alpha", w.alpha),
            ("beta", w.beta),
            ("slice_weight_urllc", w.slice_weight_urllc),
            ("slice_weight_mmtc", w.slice_weight_mmtc),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(config_err(format!("reward.{key}"), format!("must be non-negative, got {v}")));
            }
        }
        if !(w.delta > 0.0 && w.delta.is_finite()) {
            return Err(config_err("reward.delta", format!("must be positive, got {}", w.delta)));
        }
        if !(w.discount > 0.0 && w.discount <= 1.0) {
            return Err(config_err("reward.discount", format!("must lie in (0, 1], got {}", w.discount)));
        }
        self.ppo_config().validate()?;
        self.dqn_config().validate()?;
        if self.run.seed > i64::MAX as u64 {
            return Err(config_err("run.seed", "must be below 2^63"));
        }
        if self.run.experiments == 0 {
            return Err(config_err("run.experiments", "must be >= 1"));
        }
        Ok(())
    }

    /// PPO hyperparameters with the discount taken from the reward block.
    pub fn ppo_config(&self) -> PpoConfig {
        PpoConfig {
            discount: self.reward.discount,
            ..self.agent.ppo.clone()
        }
    }

    pub fn dqn_config(&self) -> DqnConfig {
        DqnConfig {
            discount: self.reward.discount,
            ..self.agent.dqn.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg = RunConfig::from_toml_str("", "empty").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.env.radio.path_loss_exp, 2.8);
        assert_eq!(cfg.env.radio.rb_bandwidth, 4e6);
        assert_eq!((cfg.env.mec.total_comm_rbs, cfg.env.mec.total_comp_units), (80, 40));
        assert_eq!((cfg.env.urllc.count_mean, cfg.env.mmtc.count_mean), (10.0, 30.0));
        assert_eq!(cfg.env.urllc.deadline, Some(0.7));
        assert_eq!((cfg.reward.alpha, cfg.reward.beta, cfg.reward.delta), (0.5, 0.5, 3.0));
        assert_eq!(cfg.ppo_config().learning_rate, 1e-4);
        assert_eq!(cfg.ppo_config().batch_size, 32);
        assert_eq!(cfg.ppo_config().discount, 0.99);
    }

    #[test]
    fn partial_slice_block_keeps_slice_defaults() {
        let cfg = RunConfig::from_toml_str("[env.mmtc]\ncount_mean = 50.0\n", "t").unwrap();
        assert_eq!(cfg.env.mmtc.count_mean, 50.0);
        assert_eq!(cfg.env.mmtc.deadline, None);
        assert_eq!(cfg.env.mmtc.local_process_power, 0.4);
        assert_eq!(cfg.env.urllc, EnvConfig::default().urllc);
    }

    #[test]
    fn errors_name_the_key() {
        let e = RunConfig::from_toml_str("[env.mec]\ntotal_comm_rbs = -1\n", "t").unwrap_err();
        assert!(e.to_string().contains("env.mec.total_comm_rbs"), "{e}");
        let e = RunConfig::from_toml_str("[env.mec]\ntotal_comm_rbs = 0\n", "t").unwrap_err();
        assert!(e.to_string().contains("env.mec.total_comm_rbs"), "{e}");
        let e = RunConfig::from_toml_str("[agent.ppo]\nclip = 0.1\n", "t").unwrap_err();
        assert!(e.to_string().contains("agent.ppo"), "{e}");
        let e = RunConfig::from_toml_str("[reward]\ndelta = 0.0\n", "t").unwrap_err();
        assert!(e.to_string().contains("reward.delta"), "{e}");
    }

    #[test]
    fn round_trip_is_lossless() {
        let mut cfg = RunConfig::default();
        cfg.env.radio.noise_variance = 1.234_567_890_123_456_7e-13;
        cfg.reward.discount = 0.97;
        cfg.agent.kind = AgentKind::Dqn;
        cfg.run.seed = 42;
        let text = cfg.to_toml_string().unwrap();
        let back = RunConfig::from_toml_str(&text, "t").unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_toml_string().unwrap(), text);
    }
}
