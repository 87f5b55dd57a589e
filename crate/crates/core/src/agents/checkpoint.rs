use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::dqn::{DqnAgent, DqnConfig, ReplayBuffer};
use super::policy::Policy;
use super::ppo::{PpoAgent, PpoConfig};
use crate::error::{Error, Result};
use crate::nn::NetworkCheckpoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgentKind {
    Ppo,
    Dqn,
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AgentKind::Ppo => "ppo",
            AgentKind::Dqn => "dqn",
        })
    }
}

impl FromStr for AgentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ppo" => Ok(AgentKind::Ppo),
            "dqn" => Ok(AgentKind::Dqn),
            other => Err(Error::invalid("agent", format!("unknown agent kind {other:?}"))),
        }
    }
}

/// Serialized learner. The replay buffer is not saved, so a resumed DQN run
/// starts with an empty one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AgentCheckpoint {
    Ppo {
        config: PpoConfig,
        discount: f64,
        episodes: u64,
        updates: u64,
        seed: u64,
        actor: NetworkCheckpoint,
        critic: NetworkCheckpoint,
    },
    Dqn {
        config: DqnConfig,
        discount: f64,
        episodes: u64,
        updates: u64,
        seed: u64,
        online: NetworkCheckpoint,
        target: NetworkCheckpoint,
    },
}

impl AgentCheckpoint {
    pub fn kind(&self) -> AgentKind {
        match self {
            AgentCheckpoint::Ppo { .. } => AgentKind::Ppo,
            AgentCheckpoint::Dqn { .. } => AgentKind::Dqn,
        }
    }

    pub fn episodes(&self) -> u64 {
        match self {
            AgentCheckpoint::Ppo { episodes, .. } | AgentCheckpoint::Dqn { episodes, .. } => *episodes,
        }
    }

    pub fn from_ppo(agent: &PpoAgent) -> Self {
        AgentCheckpoint::Ppo {
            config: agent.config.clone(),
            discount: agent.config.discount,
            episodes: agent.episodes,
            updates: agent.updates,
            seed: agent.seed,
            actor: NetworkCheckpoint::capture(&agent.actor, Some(&agent.actor_opt)),
            critic: NetworkCheckpoint::capture(&agent.critic, Some(&agent.critic_opt)),
        }
    }

    pub fn from_dqn(agent: &DqnAgent) -> Self {
        AgentCheckpoint::Dqn {
            config: agent.config.clone(),
            discount: agent.config.discount,
            episodes: agent.episodes,
            updates: agent.updates,
            seed: agent.seed,
            online: NetworkCheckpoint::capture(&agent.online, Some(&agent.optimizer)),
            target: NetworkCheckpoint::capture(&agent.target, None),
        }
    }

    pub fn into_ppo(self) -> Result<PpoAgent> {
        let AgentCheckpoint::Ppo {
            mut config,
            discount,
            episodes,
            updates,
            seed,
            actor,
            critic,
        } = self
        else {
            return Err(Error::Malformed("checkpoint holds a dqn agent, expected ppo".into()));
        };
        config.discount = discount;
        let (actor, actor_opt) = actor.restore()?;
        let (critic, critic_opt) = critic.restore()?;
        let missing = || Error::Malformed("ppo checkpoint lacks optimizer state".into());
        Ok(PpoAgent {
            config,
            actor,
            critic,
            actor_opt: actor_opt.ok_or_else(missing)?,
            critic_opt: critic_opt.ok_or_else(missing)?,
            seed,
            episodes,
            updates,
        })
    }

    pub fn into_dqn(self) -> Result<DqnAgent> {
        let AgentCheckpoint::Dqn {
            mut config,
            discount,
            episodes,
            updates,
            seed,
            online,
            target,
        } = self
        else {
            return Err(Error::Malformed("checkpoint holds a ppo agent, expected dqn".into()));
        };
        config.discount = discount;
        let (online, opt) = online.restore()?;
        let (target, _) = target.restore()?;
        Ok(DqnAgent {
            replay: ReplayBuffer::new(config.replay_capacity),
            config,
            online,
            target,
            optimizer: opt.ok_or_else(|| Error::Malformed("dqn checkpoint lacks optimizer state".into()))?,
            seed,
            episodes,
            updates,
        })
    }

    /// Greedy evaluation policy.
    pub fn into_policy(self) -> Result<Box<dyn Policy + Send>> {
        Ok(match self.kind() {
            AgentKind::Ppo => Box::new(self.into_ppo()?.policy(true)) as Box<dyn Policy + Send>,
            AgentKind::Dqn => Box::new(self.into_dqn()?.policy()),
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        serde_json::to_writer(BufWriter::new(file), self)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_reader(BufReader::new(file))?)
    }
}
