use std::fs::{self, File};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use super::config::RunConfig;
use crate::agents::{AgentCheckpoint, AgentKind, DqnAgent, PpoAgent, PpoStats};
use crate::episode::EpisodeSummary;
use crate::error::{Error, Result};

/// Callbacks invoked while training. Both default to doing nothing.
pub trait TrainObserver {
    fn episode(&mut self, _summary: &EpisodeSummary) -> Result<()> {
        Ok(())
    }

    /// Called every `checkpoint_interval` episodes (PPO: at the first rollout
    /// boundary at or past each multiple).
    fn checkpoint(&mut self, _ck: &AgentCheckpoint) -> Result<()> {
        Ok(())
    }

    fn ppo_update(&mut self, _stats: &PpoStats) {}
}

impl TrainObserver for () {}

/// Trains a fresh agent of `kind` for `cfg.run.episodes` episodes and returns
/// its final checkpoint.
pub fn train_agent(cfg: &RunConfig, kind: AgentKind, observer: &mut dyn TrainObserver) -> Result<AgentCheckpoint> {
    cfg.validate()?;
    let n_actions = cfg.env.menu.len();
    let total = cfg.run.episodes;
    let interval = cfg.run.checkpoint_interval;
    let crossed = |before: u64, after: u64| interval > 0 && after / interval > before / interval;
    match kind {
        AgentKind::Ppo => {
            let mut agent = PpoAgent::new(cfg.ppo_config(), n_actions, cfg.run.seed)?;
            let per_rollout = agent.config.episodes_per_rollout as u64;
            while agent.episodes < total {
                let before = agent.episodes;
                agent.config.episodes_per_rollout = per_rollout.min(total - before) as usize;
                let (summaries, stats) = agent.train_iteration(&cfg.env, &cfg.reward)?;
                agent.config.episodes_per_rollout = per_rollout as usize;
                for s in &summaries {
                    observer.episode(s)?;
                }
                if let Some(stats) = stats {
                    observer.ppo_update(&stats);
                }
                if crossed(before, agent.episodes) {
                    observer.checkpoint(&AgentCheckpoint::from_ppo(&agent))?;
                }
            }
            Ok(AgentCheckpoint::from_ppo(&agent))
        }
        AgentKind::Dqn => {
            let mut agent = DqnAgent::new(cfg.dqn_config(), n_actions, cfg.run.seed)?;
            while agent.episodes < total {
                let before = agent.episodes;
                let s = agent.train_episode(&cfg.env, &cfg.reward)?;
                observer.episode(&s)?;
                if crossed(before, agent.episodes) {
                    observer.checkpoint(&AgentCheckpoint::from_dqn(&agent))?;
                }
            }
            Ok(AgentCheckpoint::from_dqn(&agent))
        }
    }
}

struct FileObserver {
    dir: PathBuf,
    curve: csv::Writer<File>,
    last_checkpoint: Option<PathBuf>,
}

impl TrainObserver for FileObserver {
    fn episode(&mut self, s: &EpisodeSummary) -> Result<()> {
        self.curve.write_record([
            s.episode.to_string(),
            s.tasks.to_string(),
            s.reward.to_string(),
            s.offloaded_urllc.to_string(),
            s.offloaded_mmtc.to_string(),
        ])?;
        Ok(())
    }

    fn checkpoint(&mut self, ck: &AgentCheckpoint) -> Result<()> {
        let path = self.dir.join(format!("checkpoint_{:06}.json", ck.episodes()));
        ck.save(&path)?;
        self.curve.flush().map_err(|e| Error::io(&path, e))?;
        self.last_checkpoint = Some(path);
        Ok(())
    }
}

#[derive(Serialize)]
struct Metadata<'a> {
    command: &'a str,
    policy: String,
    seed: u64,
    episodes: u64,
    started_unix_secs: u64,
    finished_unix_secs: u64,
    /// Evaluation rounds use the same sub-seeds for every policy.
    evaluation_seeds: &'static str,
    crate_version: &'static str,
}

pub fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

/// Writes a wall-clock sidecar. Timestamps appear nowhere else, so every other
/// artifact is reproducible byte for byte.
pub fn write_metadata(dir: &Path, command: &str, policy: &str, cfg: &RunConfig, started: u64) -> Result<()> {
    let meta = Metadata {
        command,
        policy: policy.into(),
        seed: cfg.run.seed,
        episodes: cfg.run.episodes,
        started_unix_secs: started,
        finished_unix_secs: unix_now(),
        evaluation_seeds: "paired",
        crate_version: env!("CARGO_PKG_VERSION"),
    };
    let path = dir.join("metadata.json");
    let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
    serde_json::to_writer_pretty(file, &meta)?;
    Ok(())
}

pub struct TrainArtifacts {
    pub checkpoint: PathBuf,
    pub curve: PathBuf,
    pub config: PathBuf,
}

/// Trains and writes `config.toml`, `training_curve.csv`, periodic
/// `checkpoint_<episode>.json` files, the final `checkpoint.json` and
/// `metadata.json` into `out_dir`.
pub fn cmd_train(cfg: &RunConfig, kind: AgentKind, out_dir: &Path) -> Result<TrainArtifacts> {
    let started = unix_now();
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let config = out_dir.join("config.toml");
    cfg.save(&config)?;
    let curve = out_dir.join("training_curve.csv");
    let mut obs = FileObserver {
        dir: out_dir.to_path_buf(),
        curve: csv::Writer::from_path(&curve)?,
        last_checkpoint: None,
    };
    // The header must exist even for a zero-episode run.
    obs.curve
        .write_record(["episode", "tasks", "reward", "offloaded_urllc", "offloaded_mmtc"])?;
    let result = train_agent(cfg, kind, &mut obs);
    obs.curve.flush().map_err(|e| Error::io(&curve, e))?;
    let ck = match result {
        Ok(ck) => ck,
        Err(e) => {
            let kept = obs
                .last_checkpoint
                .map_or_else(|| "none".to_string(), |p| p.display().to_string());
            return Err(Error::Malformed(format!("training aborted: {e}; last good checkpoint: {kept}")));
        }
    };
    let checkpoint = out_dir.join("checkpoint.json");
    ck.save(&checkpoint)?;
    write_metadata(out_dir, "train", &kind.to_string(), cfg, started)?;
    Ok(TrainArtifacts {
        checkpoint,
        curve,
        config,
    })
}

/// Mean reward over the first and last `window` episodes of a curve.
pub fn leading_trailing_means(curve: &[EpisodeSummary], window: usize) -> Option<(f64, f64)> {
    if curve.is_empty() || window == 0 {
        return None;
    }
    let w = window.min(curve.len());
    let mean = |s: &[EpisodeSummary]| s.iter().map(|e| e.reward).sum::<f64>() / s.len() as f64;
    Some((mean(&curve[..w]), mean(&curve[curve.len() - w..])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(episodes: u64) -> RunConfig {
        let mut cfg = RunConfig::default();
        cfg.agent.ppo.hidden_dims = vec![8];
        cfg.agent.ppo.episodes_per_rollout = 2;
        cfg.agent.dqn.hidden_dims = vec![8];
        cfg.run.episodes = episodes;
        cfg.run.checkpoint_interval = 2;
        cfg
    }

    #[test]
    fn zero_episodes_gives_untrained_checkpoint_and_empty_curve() {
        let dir = tempfile::tempdir().unwrap();
        let art = cmd_train(&tiny(0), AgentKind::Ppo, dir.path()).unwrap();
        let curve = fs::read_to_string(&art.curve).unwrap();
        assert_eq!(curve.lines().count(), 1);
        let ck = AgentCheckpoint::load(&art.checkpoint).unwrap();
        assert_eq!(ck.episodes(), 0);
        let fresh = PpoAgent::new(tiny(0).ppo_config(), 36, 0).unwrap();
        assert_eq!(ck.into_ppo().unwrap().actor.flat(), fresh.actor.flat());
    }

    #[test]
    fn curves_are_byte_identical_across_runs() {
        for kind in [AgentKind::Ppo, AgentKind::Dqn] {
            let a = tempfile::tempdir().unwrap();
            let b = tempfile::tempdir().unwrap();
            let ra = cmd_train(&tiny(5), kind, a.path()).unwrap();
            let rb = cmd_train(&tiny(5), kind, b.path()).unwrap();
            let ca = fs::read(&ra.curve).unwrap();
            assert_eq!(ca, fs::read(&rb.curve).unwrap());
            assert_eq!(fs::read(&ra.checkpoint).unwrap(), fs::read(&rb.checkpoint).unwrap());
            assert_eq!(String::from_utf8(ca).unwrap().lines().count(), 6);
            assert!(a.path().join("checkpoint_000002.json").exists());
            assert!(a.path().join("metadata.json").exists());
        }
    }
}
