//! Clipped-surrogate PPO with separate actor and critic networks and a single
//! categorical head over the joint action menu.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::gae::compute_gae;
use super::policy::Policy;
use crate::episode::{ActionMask, DecisionContext, EnvConfig, EpisodeSummary, Observation, Round, OBS_DIM};
use crate::error::{Error, Result};
use crate::nn::{masked_logits, AdamConfig, AdamState, Categorical, Gradients, Mlp, MlpSpec};
use crate::reward::RewardWeights;
use crate::seed::{stream, Domain, SimRng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PpoConfig {
    pub clip_epsilon: f64,
    pub gae_lambda: f64,
    pub epochs_per_update: usize,
    pub episodes_per_rollout: usize,
    pub value_loss_coeff: f64,
    pub entropy_coeff: f64,
    pub batch_size: usize,
    pub learning_rate: f64,
    /// Taken from the reward block's discount by the harness.
    #[serde(skip)]
    pub discount: f64,
    pub max_grad_norm: f64,
    pub hidden_dims: Vec<usize>,
}

impl Default for PpoConfig {
    fn default() -> Self {
        PpoConfig {
            clip_epsilon: 0.2,
            gae_lambda: 0.95,
            epochs_per_update: 4,
            episodes_per_rollout: 16,
            value_loss_coeff: 0.5,
            entropy_coeff: 0.01,
            batch_size: 32,
            learning_rate: 1e-4,
            discount: 0.99,
            max_grad_norm: 0.5,
            hidden_dims: MlpSpec::DEFAULT_HIDDEN.to_vec(),
        }
    }
}

impl PpoConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, message: String| {
            Err(Error::Config {
                path: format!("agent.ppo.{key}"),
                message,
            })
        };
        if !(self.clip_epsilon > 0.0 && self.clip_epsilon < 1.0) {
            return bad("clip_epsilon", format!("must lie in (0, 1), got {}", self.clip_epsilon));
        }
        if !(0.0..=1.0).contains(&self.gae_lambda) {
            return bad("gae_lambda", format!("must lie in [0, 1], got {}", self.gae_lambda));
        }
        if self.epochs_per_update == 0 {
            return bad("epochs_per_update", "must be >= 1".into());
        }
        if self.episodes_per_rollout == 0 {
            return bad("episodes_per_rollout", "must be >= 1".into());
        }
        if self.batch_size == 0 {
            return bad("batch_size", "must be >= 1".into());
        }
        if !(self.learning_rate > 0.0) {
            return bad("learning_rate", format!("must be positive, got {}", self.learning_rate));
        }
        if !(self.discount > 0.0 && self.discount <= 1.0) {
            return bad("discount", format!("must lie in (0, 1], got {}", self.discount));
        }
        if !(self.value_loss_coeff >= 0.0 && self.entropy_coeff >= 0.0 && self.max_grad_norm > 0.0) {
            return bad("value_loss_coeff", "loss coefficients must be non-negative, max_grad_norm positive".into());
        }
        if self.hidden_dims.contains(&0) {
            return bad("hidden_dims", "every hidden layer needs at least one unit".into());
        }
        Ok(())
    }

    fn adam(&self) -> AdamConfig {
        AdamConfig {
            learning_rate: self.learning_rate,
            ..AdamConfig::default()
        }
    }
}

/// Steps gathered by [`PpoAgent::collect_rollouts`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RolloutBuffer {
    pub observations: Vec<Observation>,
    pub masks: Vec<ActionMask>,
    pub actions: Vec<usize>,
    pub log_probs: Vec<f64>,
    pub rewards: Vec<f64>,
    pub values: Vec<f64>,
    pub dones: Vec<bool>,
    pub episodes: Vec<EpisodeSummary>,
}

impl RolloutBuffer {
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PpoStats {
    pub policy_loss: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub approx_kl: f64,
    pub clip_fraction: f64,
    /// Largest |ratio - 1| in the very first minibatch, before any step.
    pub initial_ratio_deviation: f64,
    pub minibatches: usize,
}

pub struct PpoAgent {
    pub config: PpoConfig,
    pub actor: Mlp,
    pub critic: Mlp,
    pub actor_opt: AdamState,
    pub critic_opt: AdamState,
    pub seed: u64,
    pub episodes: u64,
    pub updates: u64,
}

impl PpoAgent {
    pub fn new(config: PpoConfig, n_actions: usize, seed: u64) -> Result<Self> {
        config.validate()?;
        let mut actor = Mlp::new(MlpSpec::new(OBS_DIM, config.hidden_dims.clone(), n_actions), seed)?;
        // Near-uniform initial policy.
        let last = actor.layers.len() - 1;
        actor.scale_layer(last, 0.01);
        let critic = Mlp::new(MlpSpec::new(OBS_DIM, config.hidden_dims.clone(), 1), seed ^ 0x5eed_c0de)?;
        let actor_opt = AdamState::new(&actor, config.adam());
        let critic_opt = AdamState::new(&critic, config.adam());
        Ok(PpoAgent {
            config,
            actor,
            critic,
            actor_opt,
            critic_opt,
            seed,
            episodes: 0,
            updates: 0,
        })
    }

    pub fn distribution(&self, observation: &Observation, mask: &ActionMask) -> Result<Categorical> {
        let logits = self.actor.predict(observation.as_slice())?;
        Categorical::from_logits(&masked_logits(&logits, mask))
    }

    pub fn value(&self, observation: &Observation) -> Result<f64> {
        Ok(self.critic.predict(observation.as_slice())?[0])
    }

    /// Plays `episodes_per_rollout` rounds with the current stochastic policy.
    /// Episode `k` of the agent's lifetime always uses training stream `k`.
    pub fn collect_rollouts(&mut self, env: &EnvConfig, weights: &RewardWeights) -> Result<RolloutBuffer> {
        let mut buf = RolloutBuffer::default();
        for _ in 0..self.config.episodes_per_rollout {
            let episode = self.episodes;
            let mut rng = stream(self.seed, Domain::Training, episode);
            let mut round = Round::start(env, weights, &mut rng, episode);
            while let Some(ctx) = round.context() {
                let dist = self.distribution(&ctx.observation, &ctx.mask)?;
                let action = dist.sample(&mut rng);
                let value = self.value(&ctx.observation)?;
                let (obs, mask) = (ctx.observation, ctx.mask.clone());
                let step = round.apply_action(action)?;
                buf.observations.push(obs);
                buf.masks.push(mask);
                buf.actions.push(action);
                buf.log_probs.push(dist.log_prob(action));
                buf.rewards.push(step.reward);
                buf.values.push(value);
                buf.dones.push(step.done);
            }
            buf.episodes.push(EpisodeSummary::from_trace(episode, &round.finish()));
            self.episodes += 1;
        }
        Ok(buf)
    }

    pub fn update(&mut self, buf: &RolloutBuffer) -> Result<PpoStats> {
        if buf.is_empty() {
            return Err(Error::LengthMismatch("empty rollout buffer".into()));
        }
        let cfg = self.config.clone();
        let (mut adv, returns) = compute_gae(&buf.rewards, &buf.values, &buf.dones, cfg.discount, cfg.gae_lambda)?;
        let n = adv.len();
        let mean = adv.iter().sum::<f64>() / n as f64;
        let std = (adv.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
        for a in &mut adv {
            *a = (*a - mean) / (std + 1e-8);
        }

        let mut rng = stream(self.seed, Domain::AgentUpdate, self.updates);
        let mut order: Vec<usize> = (0..n).collect();
        let mut ga = Gradients::zeros_like(&self.actor);
        let mut gc = Gradients::zeros_like(&self.critic);
        let mut stats = PpoStats::default();
        let (mut clipped, mut seen) = (0usize, 0usize);

        for epoch in 0..cfg.epochs_per_update {
            order.shuffle(&mut rng);
            for (b, chunk) in order.chunks(cfg.batch_size).enumerate() {
                ga.fill_zero();
                gc.fill_zero();
                let m = chunk.len() as f64;
                let (mut pl, mut vl, mut ent, mut kl) = (0.0, 0.0, 0.0, 0.0);
                let mut max_dev: f64 = 0.0;
                for &i in chunk {
                    let obs = buf.observations[i].as_slice();
                    let (logits, cache) = self.actor.forward(obs)?;
                    let dist = Categorical::from_logits(&masked_logits(&logits, &buf.masks[i]))?;
                    let a = buf.actions[i];
                    let log_ratio = dist.log_prob(a) - buf.log_probs[i];
                    let ratio = log_ratio.exp();
                    max_dev = max_dev.max((ratio - 1.0).abs());
                    let unclipped = ratio * adv[i];
                    let clipped_obj = ratio.clamp(1.0 - cfg.clip_epsilon, 1.0 + cfg.clip_epsilon) * adv[i];
                    // The gradient flows through the ratio only when the
                    // unclipped term is the active minimum.
                    let coef = if unclipped <= clipped_obj { ratio * adv[i] } else { 0.0 };
                    if (ratio - 1.0).abs() > cfg.clip_epsilon {
                        clipped += 1;
                    }
                    seen += 1;
                    let h = dist.entropy();
                    pl -= unclipped.min(clipped_obj);
                    ent += h;
                    kl += (ratio - 1.0) - log_ratio;

                    let g_lp = dist.grad_log_prob(a);
                    let g_h = dist.grad_entropy();
                    let dlogits: Vec<f64> = g_lp
                        .iter()
                        .zip(&g_h)
                        .map(|(lp, he)| (-coef * lp - cfg.entropy_coeff * he) / m)
                        .collect();
                    self.actor.backward_accumulate(&cache, &dlogits, &mut ga)?;

                    let (v, vcache) = self.critic.forward(obs)?;
                    let diff = v[0] - returns[i];
                    vl += diff * diff;
                    self.critic
                        .backward_accumulate(&vcache, &[2.0 * cfg.value_loss_coeff * diff / m], &mut gc)?;
                }
                if epoch == 0 && b == 0 {
                    stats.initial_ratio_deviation = max_dev;
                }
                let (pl, vl) = (pl / m, vl / m);
                if !pl.is_finite() || !vl.is_finite() || !ga.is_finite() || !gc.is_finite() {
                    return Err(Error::NonFiniteLoss {
                        phase: "ppo update",
                        detail: format!(
                            "update {} epoch {epoch} minibatch {b}: policy loss {pl}, value loss {vl}",
                            self.updates
                        ),
                    });
                }
                ga.clip_norm(cfg.max_grad_norm);
                gc.clip_norm(cfg.max_grad_norm);
                self.actor_opt.step(&mut self.actor, &ga)?;
                self.critic_opt.step(&mut self.critic, &gc)?;
                stats.policy_loss += pl;
                stats.value_loss += vl;
                stats.entropy += ent / m;
                stats.approx_kl += kl / m;
                stats.minibatches += 1;
            }
        }
        let k = stats.minibatches as f64;
        stats.policy_loss /= k;
        stats.value_loss /= k;
        stats.entropy /= k;
        stats.approx_kl /= k;
        stats.clip_fraction = clipped as f64 / seen.max(1) as f64;
        self.updates += 1;
        Ok(stats)
    }

    /// One collect-then-update cycle.
    pub fn train_iteration(
        &mut self,
        env: &EnvConfig,
        weights: &RewardWeights,
    ) -> Result<(Vec<EpisodeSummary>, Option<PpoStats>)> {
        let buf = self.collect_rollouts(env, weights)?;
        let stats = if buf.is_empty() { None } else { Some(self.update(&buf)?) };
        Ok((buf.episodes, stats))
    }

    pub fn policy(&self, greedy: bool) -> PpoPolicy {
        PpoPolicy {
            actor: self.actor.clone(),
            greedy,
        }
    }
}

/// Frozen actor. Greedy mode takes the most likely feasible action.
#[derive(Debug, Clone)]
pub struct PpoPolicy {
    pub actor: Mlp,
    pub greedy: bool,
}

impl Policy for PpoPolicy {
    fn name(&self) -> String {
        "ppo".into()
    }

    fn act(&mut self, ctx: &DecisionContext<'_>, rng: &mut SimRng) -> Result<usize> {
        let logits = self.actor.predict(ctx.observation.as_slice())?;
        let dist = Categorical::from_logits(&masked_logits(&logits, &ctx.mask))?;
        Ok(if self.greedy { dist.mode() } else { dist.sample(rng) })
    }

    fn is_deterministic(&self) -> bool {
        self.greedy
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> PpoConfig {
        PpoConfig {
            hidden_dims: vec![16, 16],
            episodes_per_rollout: 2,
            batch_size: 8,
            epochs_per_update: 2,
            ..PpoConfig::default()
        }
    }

    fn one_task_env() -> EnvConfig {
        let mut env = EnvConfig::default();
        env.urllc.count_mean = 1.0;
        env.urllc.count_variance = 0.0;
        env.mmtc.count_mean = 0.0;
        env.mmtc.count_variance = 0.0;
        env
    }

    #[test]
    fn single_task_round_gives_one_terminal_step() {
        let cfg = PpoConfig {
            episodes_per_rollout: 1,
            ..small_config()
        };
        let mut agent = PpoAgent::new(cfg, 36, 1).unwrap();
        let buf = agent.collect_rollouts(&one_task_env(), &RewardWeights::default()).unwrap();
        assert_eq!(buf.len(), 1);
        assert_eq!(buf.dones, vec![true]);
    }

    #[test]
    fn recorded_actions_respect_masks() {
        let mut env = EnvConfig::default();
        env.mec.total_comp_units = 12;
        env.mec.total_comm_rbs = 16;
        let mut agent = PpoAgent::new(small_config(), 36, 2).unwrap();
        let buf = agent.collect_rollouts(&env, &RewardWeights::default()).unwrap();
        assert!(!buf.is_empty());
        for (a, m) in buf.actions.iter().zip(&buf.masks) {
            assert!(m.is_feasible(*a));
        }
    }

    #[test]
    fn rollouts_are_reproducible() {
        let env = EnvConfig::default();
        let w = RewardWeights::default();
        let a = PpoAgent::new(small_config(), 36, 3).unwrap().collect_rollouts(&env, &w).unwrap();
        let b = PpoAgent::new(small_config(), 36, 3).unwrap().collect_rollouts(&env, &w).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn update_is_deterministic_and_starts_at_ratio_one() {
        let env = EnvConfig::default();
        let w = RewardWeights::default();
        let mut a = PpoAgent::new(small_config(), 36, 4).unwrap();
        let mut b = PpoAgent::new(small_config(), 36, 4).unwrap();
        let before = a.actor.flat();
        let buf = a.collect_rollouts(&env, &w).unwrap();
        b.collect_rollouts(&env, &w).unwrap();
        let sa = a.update(&buf).unwrap();
        let sb = b.update(&buf).unwrap();
        assert_eq!(sa, sb);
        assert_eq!(sa.initial_ratio_deviation, 0.0);
        assert_ne!(a.actor.flat(), before);
        assert_eq!(a.actor.flat(), b.actor.flat());
    }

    #[test]
    fn clip_identity_and_definition() {
        let eps = 0.2f64;
        for adv in [-1.5, 0.0, 2.0] {
            let r = 1.0f64;
            assert_eq!((r * adv).min(r.clamp(1.0 - eps, 1.0 + eps) * adv), r * adv);
        }
        let (r, adv) = (1.5f64, 2.0);
        assert_eq!((r * adv).min(r.clamp(1.0 - eps, 1.0 + eps) * adv), 2.4);
    }

    #[test]
    fn invalid_config_is_rejected() {
        let cfg = PpoConfig {
            clip_epsilon: 1.0,
            ..PpoConfig::default()
        };
        assert!(PpoAgent::new(cfg, 36, 0).is_err());
    }
}
