//! Deep Q-learning over the joint action menu with a replay buffer and a
//! hard-synced target network.

use rand::seq::IteratorRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::policy::Policy;
use crate::episode::{ActionMask, DecisionContext, EnvConfig, EpisodeSummary, Observation, Round, OBS_DIM};
use crate::error::{Error, Result};
use crate::nn::{AdamConfig, AdamState, Gradients, Mlp, MlpSpec};
use crate::reward::RewardWeights;
use crate::seed::{stream, Domain, SimRng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DqnConfig {
    pub replay_capacity: usize,
    /// Counted in gradient updates.
    pub target_sync_interval: u64,
    pub epsilon_start: f64,
    pub epsilon_end: f64,
    pub epsilon_decay_episodes: u64,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub huber_delta: f64,
    pub max_grad_norm: f64,
    /// Taken from the reward block's discount by the harness.
    #[serde(skip)]
    pub discount: f64,
    pub hidden_dims: Vec<usize>,
}

impl Default for DqnConfig {
    fn default() -> Self {
        DqnConfig {
            replay_capacity: 50_000,
            target_sync_interval: 1000,
            epsilon_start: 1.0,
            epsilon_end: 0.05,
            epsilon_decay_episodes: 10_000,
            batch_size: 32,
            learning_rate: 1e-4,
            huber_delta: 1.0,
            max_grad_norm: 10.0,
            discount: 0.99,
            hidden_dims: MlpSpec::DEFAULT_HIDDEN.to_vec(),
        }
    }
}

impl DqnConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, message: &str| {
            Err(Error::Config {
                path: format!("agent.dqn.{key}"),
                message: message.into(),
            })
        };
        if self.replay_capacity == 0 {
            return bad("replay_capacity", "must be >= 1");
        }
        if self.batch_size == 0 || self.batch_size > self.replay_capacity {
            return bad("batch_size", "must be in 1..=replay_capacity");
        }
        if self.target_sync_interval == 0 {
            return bad("target_sync_interval", "must be >= 1");
        }
        for (k, v) in [("epsilon_start", self.epsilon_start), ("epsilon_end", self.epsilon_end)] {
            if !(0.0..=1.0).contains(&v) {
                return bad(k, "must lie in [0, 1]");
            }
        }
        if !(self.learning_rate > 0.0) {
            return bad("learning_rate", "must be positive");
        }
        if !(self.huber_delta > 0.0) || !(self.max_grad_norm > 0.0) {
            return bad("huber_delta", "huber_delta and max_grad_norm must be positive");
        }
        if !(self.discount > 0.0 && self.discount <= 1.0) {
            return bad("discount", "must lie in (0, 1]");
        }
        if self.hidden_dims.contains(&0) {
            return bad("hidden_dims", "every hidden layer needs at least one unit");
        }
        Ok(())
    }

    pub fn schedule(&self) -> EpsilonSchedule {
        EpsilonSchedule {
            start: self.epsilon_start,
            end: self.epsilon_end,
            decay_episodes: self.epsilon_decay_episodes,
        }
    }
}

/// Linear decay from `start` to `end`, then flat.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonSchedule {
    pub start: f64,
    pub end: f64,
    pub decay_episodes: u64,
}

impl EpsilonSchedule {
    pub fn value(&self, episode: u64) -> f64 {
        if self.decay_episodes == 0 || episode >= self.decay_episodes {
            return self.end;
        }
        let frac = episode as f64 / self.decay_episodes as f64;
        self.start + (self.end - self.start) * frac
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub observation: Observation,
    pub action: usize,
    pub reward: f64,
    /// `None` when this was the round's last task.
    pub next: Option<(Observation, ActionMask)>,
}

/// Fixed-capacity ring buffer; the oldest transition is overwritten first.
#[derive(Debug, Clone)]
pub struct ReplayBuffer {
    capacity: usize,
    items: Vec<Transition>,
    head: usize,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        ReplayBuffer {
            capacity,
            items: Vec::with_capacity(capacity.min(4096)),
            head: 0,
        }
    }

    pub fn push(&mut self, t: Transition) {
        if self.items.len() < self.capacity {
            self.items.push(t);
        } else {
            self.items[self.head] = t;
            self.head = (self.head + 1) % self.capacity;
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Uniform draw with replacement.
    pub fn sample<'a, R: Rng + ?Sized>(&'a self, rng: &mut R, n: usize) -> Vec<&'a Transition> {
        (0..n).map(|_| &self.items[rng.random_range(0..self.items.len())]).collect()
    }

    /// Oldest first.
    pub fn iter(&self) -> impl Iterator<Item = &Transition> {
        self.items[self.head..].iter().chain(&self.items[..self.head])
    }
}

fn best_feasible(q: &[f64], mask: &ActionMask) -> Option<(usize, f64)> {
    mask.feasible()
        .map(|i| (i, q[i]))
        .fold(None, |best, (i, v)| match best {
            Some((_, bv)) if bv >= v => best,
            _ => Some((i, v)),
        })
}

/// Epsilon-greedy choice restricted to feasible actions.
pub fn dqn_act(net: &Mlp, observation: &Observation, mask: &ActionMask, epsilon: f64, rng: &mut SimRng) -> Result<usize> {
    if mask.count() == 0 {
        return Err(Error::AllMasked);
    }
    if rng.random::<f64>() < epsilon {
        return mask.feasible().choose(rng).ok_or(Error::AllMasked);
    }
    let q = net.predict(observation.as_slice())?;
    best_feasible(&q, mask).map(|(i, _)| i).ok_or(Error::AllMasked)
}

pub struct DqnAgent {
    pub config: DqnConfig,
    pub online: Mlp,
    pub target: Mlp,
    pub optimizer: AdamState,
    pub replay: ReplayBuffer,
    pub seed: u64,
    pub episodes: u64,
    pub updates: u64,
}

impl DqnAgent {
    pub fn new(config: DqnConfig, n_actions: usize, seed: u64) -> Result<Self> {
        config.validate()?;
        let online = Mlp::new(MlpSpec::new(OBS_DIM, config.hidden_dims.clone(), n_actions), seed)?;
        let target = online.clone();
        let optimizer = AdamState::new(
            &online,
            AdamConfig {
                learning_rate: config.learning_rate,
                ..AdamConfig::default()
            },
        );
        let replay = ReplayBuffer::new(config.replay_capacity);
        Ok(DqnAgent {
            config,
            online,
            target,
            optimizer,
            replay,
            seed,
            episodes: 0,
            updates: 0,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.config.schedule().value(self.episodes)
    }

    /// Plays one round, storing transitions and running one update per
    /// decision once the buffer holds a full batch.
    pub fn train_episode(&mut self, env: &EnvConfig, weights: &RewardWeights) -> Result<EpisodeSummary> {
        let episode = self.episodes;
        let epsilon = self.epsilon();
        let mut rng = stream(self.seed, Domain::Training, episode);
        let mut update_rng = stream(self.seed, Domain::AgentUpdate, episode);
        let mut round = Round::start(env, weights, &mut rng, episode);
        let mut pending: Option<(Observation, usize, f64)> = None;
        while let Some(ctx) = round.context() {
            let (obs, mask) = (ctx.observation, ctx.mask.clone());
            if let Some((o, a, r)) = pending.take() {
                self.replay.push(Transition {
                    observation: o,
                    action: a,
                    reward: r,
                    next: Some((obs, mask.clone())),
                });
            }
            let action = dqn_act(&self.online, &obs, &mask, epsilon, &mut rng)?;
            let step = round.apply_action(action)?;
            pending = Some((obs, action, step.reward));
            if self.replay.len() >= self.config.batch_size {
                self.update(&mut update_rng)?;
            }
        }
        if let Some((o, a, r)) = pending {
            self.replay.push(Transition {
                observation: o,
                action: a,
                reward: r,
                next: None,
            });
        }
        self.episodes += 1;
        Ok(EpisodeSummary::from_trace(episode, &round.finish()))
    }

    /// One Huber-loss gradient step; returns the minibatch loss.
    pub fn update(&mut self, rng: &mut SimRng) -> Result<f64> {
        let m = self.config.batch_size;
        if self.replay.len() < m {
            return Err(Error::UnderfilledReplay {
                len: self.replay.len(),
                needed: m,
            });
        }
        let batch = self.replay.sample(rng, m);
        let mut grads = Gradients::zeros_like(&self.online);
        let mut loss = 0.0;
        let delta = self.config.huber_delta;
        for t in batch {
            let bootstrap = match &t.next {
                Some((next_obs, next_mask)) => {
                    let q_next = self.target.predict(next_obs.as_slice())?;
                    best_feasible(&q_next, next_mask).map_or(0.0, |(_, v)| v)
                }
                None => 0.0,
            };
            let y = t.reward + self.config.discount * bootstrap;
            let (q, cache) = self.online.forward(t.observation.as_slice())?;
            let diff = q[t.action] - y;
            loss += if diff.abs() <= delta {
                0.5 * diff * diff
            } else {
                delta * (diff.abs() - 0.5 * delta)
            };
            let mut out_grad = vec![0.0; q.len()];
            out_grad[t.action] = diff.clamp(-delta, delta) / m as f64;
            self.online.backward_accumulate(&cache, &out_grad, &mut grads)?;
        }
        loss /= m as f64;
        if !loss.is_finite() || !grads.is_finite() {
            return Err(Error::NonFiniteLoss {
                phase: "dqn update",
                detail: format!("update {}: loss {loss}", self.updates),
            });
        }
        grads.clip_norm(self.config.max_grad_norm);
        self.optimizer.step(&mut self.online, &grads)?;
        self.updates += 1;
        if self.updates % self.config.target_sync_interval == 0 {
            self.sync_target()?;
        }
        Ok(loss)
    }

    pub fn sync_target(&mut self) -> Result<()> {
        self.target.copy_from(&self.online)
    }

    pub fn policy(&self) -> DqnPolicy {
        DqnPolicy {
            net: self.online.clone(),
            epsilon: 0.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DqnPolicy {
    pub net: Mlp,
    pub epsilon: f64,
}

impl Policy for DqnPolicy {
    fn name(&self) -> String {
        "dqn".into()
    }

    fn act(&mut self, ctx: &DecisionContext<'_>, rng: &mut SimRng) -> Result<usize> {
        dqn_act(&self.net, &ctx.observation, &ctx.mask, self.epsilon, rng)
    }

    fn is_deterministic(&self) -> bool {
        self.epsilon == 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn obs(x: f64) -> Observation {
        Observation([x; OBS_DIM])
    }

    #[test]
    fn epsilon_schedule_is_linear_then_flat() {
        let s = EpsilonSchedule {
            start: 1.0,
            end: 0.05,
            decay_episodes: 10_000,
        };
        assert_eq!(s.value(0), 1.0);
        assert!((s.value(5000) - 0.525).abs() < 1e-12);
        assert_eq!(s.value(10_000), 0.05);
        assert_eq!(s.value(1_000_000), 0.05);
    }

    #[test]
    fn replay_overwrites_oldest() {
        let mut buf = ReplayBuffer::new(3);
        for k in 0..5 {
            buf.push(Transition {
                observation: obs(0.0),
                action: k,
                reward: 0.0,
                next: None,
            });
        }
        assert_eq!(buf.len(), 3);
        let order: Vec<usize> = buf.iter().map(|t| t.action).collect();
        assert_eq!(order, vec![2, 3, 4]);
    }

    #[test]
    fn greedy_action_is_feasible_argmax() {
        let net = Mlp::new(MlpSpec::new(OBS_DIM, vec![8], 4), 1).unwrap();
        let q = net.predict(obs(0.5).as_slice()).unwrap();
        let mask = ActionMask(vec![true, false, true, true]);
        let mut rng = SimRng::seed_from_u64(0);
        let a = dqn_act(&net, &obs(0.5), &mask, 0.0, &mut rng).unwrap();
        assert!(mask.is_feasible(a));
        for i in mask.feasible() {
            assert!(q[a] >= q[i]);
        }
        let none = ActionMask(vec![false; 4]);
        assert!(matches!(dqn_act(&net, &obs(0.5), &none, 0.0, &mut rng), Err(Error::AllMasked)));
    }

    #[test]
    fn terminal_target_is_reward() {
        // Single terminal transition: one update moves Q(s, a) toward r.
        let cfg = DqnConfig {
            hidden_dims: vec![8],
            batch_size: 1,
            replay_capacity: 1,
            learning_rate: 1e-2,
            ..DqnConfig::default()
        };
        let mut agent = DqnAgent::new(cfg, 2, 3).unwrap();
        agent.replay.push(Transition {
            observation: obs(0.3),
            action: 1,
            reward: 0.8,
            next: None,
        });
        let before = (agent.online.predict(obs(0.3).as_slice()).unwrap()[1] - 0.8).abs();
        let mut rng = SimRng::seed_from_u64(1);
        for _ in 0..20 {
            agent.update(&mut rng).unwrap();
        }
        let after = (agent.online.predict(obs(0.3).as_slice()).unwrap()[1] - 0.8).abs();
        assert!(after < before);
    }

    #[test]
    fn underfilled_replay_is_an_error() {
        let mut agent = DqnAgent::new(
            DqnConfig {
                hidden_dims: vec![4],
                ..DqnConfig::default()
            },
            2,
            0,
        )
        .unwrap();
        let mut rng = SimRng::seed_from_u64(0);
        assert!(matches!(agent.update(&mut rng), Err(Error::UnderfilledReplay { .. })));
    }

    #[test]
    fn target_syncs_on_interval() {
        let cfg = DqnConfig {
            hidden_dims: vec![4],
            batch_size: 1,
            target_sync_interval: 2,
            learning_rate: 1e-2,
            ..DqnConfig::default()
        };
        let mut agent = DqnAgent::new(cfg, 2, 5).unwrap();
        agent.replay.push(Transition {
            observation: obs(1.0),
            action: 0,
            reward: 1.0,
            next: None,
        });
        let mut rng = SimRng::seed_from_u64(2);
        agent.update(&mut rng).unwrap();
        assert_ne!(agent.online.flat(), agent.target.flat());
        agent.update(&mut rng).unwrap();
        assert_eq!(agent.online.flat(), agent.target.flat());
    }
}
