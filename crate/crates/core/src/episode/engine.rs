use super::arrivals::{sample_arrivals, Arrival};
use super::config::EnvConfig;
use super::menu::{feasible_action_mask, ActionMask};
use super::observation::{build_observation, Observation, ObservationBounds};
use super::pools::ResourcePools;
use super::trace::{EpisodeTrace, StepRecord};
use crate::agents::Policy;
use crate::error::{Error, Result};
use crate::model::{execution_outcome, AllocationDecision, ExecutionOutcome, RadioParams};
use crate::reward::{step_reward, RewardWeights};
use crate::seed::SimRng;

/// Everything a policy may look at when deciding one task.
#[derive(Debug, Clone)]
pub struct DecisionContext<'a> {
    pub env: &'a EnvConfig,
    pub arrival: &'a Arrival,
    pub radio: RadioParams,
    pub observation: Observation,
    pub mask: ActionMask,
    pub pools: ResourcePools,
    /// Position of this task within the round.
    pub position: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepResult {
    pub reward: f64,
    pub outcome: ExecutionOutcome,
    pub decision: AllocationDecision,
    pub pools: ResourcePools,
    pub done: bool,
}

/// One arrival round in progress.
pub struct Round<'a> {
    env: &'a EnvConfig,
    weights: &'a RewardWeights,
    bounds: ObservationBounds,
    arrivals: Vec<Arrival>,
    pools: ResourcePools,
    steps: Vec<StepRecord>,
    round_seed: u64,
}

impl<'a> Round<'a> {
    /// Samples a fresh round and resets the pools to their totals.
    pub fn start(env: &'a EnvConfig, weights: &'a RewardWeights, rng: &mut SimRng, round_seed: u64) -> Self {
        let arrivals = sample_arrivals(rng, env);
        Self::from_arrivals(env, weights, arrivals, round_seed)
    }

    pub fn from_arrivals(
        env: &'a EnvConfig,
        weights: &'a RewardWeights,
        arrivals: Vec<Arrival>,
        round_seed: u64,
    ) -> Self {
        Round {
            env,
            weights,
            bounds: ObservationBounds::from_env(env),
            steps: Vec::with_capacity(arrivals.len()),
            arrivals,
            pools: env.full_pools(),
            round_seed,
        }
    }

    pub fn len(&self) -> usize {
        self.arrivals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrivals.is_empty()
    }

    pub fn is_done(&self) -> bool {
        self.steps.len() == self.arrivals.len()
    }

    pub fn pools(&self) -> &ResourcePools {
        &self.pools
    }

    pub fn env(&self) -> &EnvConfig {
        self.env
    }

    pub fn bounds(&self) -> &ObservationBounds {
        &self.bounds
    }

    /// Context for the next undecided task, or `None` once the round is over.
    pub fn context(&self) -> Option<DecisionContext<'_>> {
        let position = self.steps.len();
        let arrival = self.arrivals.get(position)?;
        let radio = self.env.radio.with_gain(arrival.channel_gain);
        Some(DecisionContext {
            env: self.env,
            arrival,
            radio,
            observation: build_observation(
                &arrival.task,
                &arrival.ue,
                &radio,
                &self.env.mec,
                &self.pools,
                &self.bounds,
            ),
            mask: feasible_action_mask(&self.env.menu, &self.pools),
            pools: self.pools,
            position,
        })
    }

    /// Applies menu action `action` to the current task: grants resources,
    /// evaluates the outcome and reward, and records the step.
    pub fn apply_action(&mut self, action: usize) -> Result<StepResult> {
        let position = self.steps.len();
        let arrival = *self
            .arrivals
            .get(position)
            .ok_or_else(|| Error::Malformed("round already finished".into()))?;
        if action >= self.env.menu.len() {
            return Err(Error::invalid("action", format!("index {action} outside the menu")));
        }
        let (k_comm, k_comp) = self.env.menu.pair(action);
        if !self.pools.fits(k_comm, k_comp) {
            return Err(Error::Infeasible {
                k_comm,
                k_comp,
                comm_remaining: self.pools.comm_remaining,
                comp_remaining: self.pools.comp_remaining,
            });
        }
        let decision = self.env.menu.decision(action);
        let radio = self.env.radio.with_gain(arrival.channel_gain);
        let observation = build_observation(
            &arrival.task,
            &arrival.ue,
            &radio,
            &self.env.mec,
            &self.pools,
            &self.bounds,
        );
        let outcome = execution_outcome(&arrival.task, &arrival.ue, &radio, &self.env.mec, &decision)?;
        let reward = step_reward(arrival.task.slice, &outcome, arrival.task.deadline, self.weights)?;
        self.pools.grant(&decision)?;
        self.steps.push(StepRecord {
            position,
            arrival,
            observation,
            action,
            decision,
            outcome,
            reward,
        });
        Ok(StepResult {
            reward,
            outcome,
            decision,
            pools: self.pools,
            done: self.is_done(),
        })
    }

    pub fn finish(self) -> EpisodeTrace {
        EpisodeTrace {
            round_seed: self.round_seed,
            pools_initial: self.env.full_pools(),
            pools_final: self.pools,
            steps: self.steps,
        }
    }
}

/// Plays one full round with `policy`.
pub fn run_episode<P: Policy + ?Sized>(
    policy: &mut P,
    rng: &mut SimRng,
    env: &EnvConfig,
    weights: &RewardWeights,
    round_seed: u64,
) -> Result<EpisodeTrace> {
    let mut round = Round::start(env, weights, rng, round_seed);
    policy.begin_episode(round.pools());
    while let Some(ctx) = round.context() {
        let action = policy.act(&ctx, rng)?;
        round.apply_action(action)?;
    }
    Ok(round.finish())
}
