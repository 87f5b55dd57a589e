//! Slice-specific rewards and the resource-pool constraints.
//!
//! Both slice rewards squash a weighted improvement score through a shifted
//! logistic `2 / (1 + e^(-delta * r)) - 1`, so local execution (no improvement)
//! always scores exactly zero and every reward lies in (-1, 1).

use serde::{Deserialize, Serialize};

use crate::episode::ResourcePools;
use crate::error::{Error, Result};
use crate::model::{AllocationDecision, ExecutionOutcome, SliceId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RewardWeights {
    /// Weight of the latency-improvement term.
    pub alpha: f64,
    /// Weight of the deadline (URLLC) or energy (mMTC) term.
    pub beta: f64,
    /// Sharpness of the squashing sigmoid.
    pub delta: f64,
    pub slice_weight_urllc: f64,
    pub slice_weight_mmtc: f64,
    pub discount: f64,
}

impl Default for RewardWeights {
    fn default() -> Self {
        RewardWeights {
            alpha: 0.5,
            beta: 0.5,
            delta: 3.0,
            slice_weight_urllc: 1.0,
            slice_weight_mmtc: 1.0,
            discount: 0.99,
        }
    }
}

impl RewardWeights {
    pub fn slice_weight(&self, slice: SliceId) -> f64 {
        match slice {
            SliceId::Urllc => self.slice_weight_urllc,
            SliceId::Mmtc => self.slice_weight_mmtc,
        }
    }
}

fn squash(score: f64, delta: f64) -> f64 {
    // 2 / (1 + e^-x) - 1 == tanh(x / 2), which keeps full precision near zero
    // and is exactly odd.
    (0.5 * delta * score).tanh()
}

pub fn urllc_score(outcome: &ExecutionOutcome, deadline: f64, w: &RewardWeights) -> f64 {
    w.alpha * (outcome.t_local - outcome.t_exe) / outcome.t_local + w.beta * (deadline - outcome.t_exe) / deadline
}

pub fn mmtc_score(outcome: &ExecutionOutcome, w: &RewardWeights) -> f64 {
    w.alpha * (outcome.t_local - outcome.t_exe) / outcome.t_local
        + w.beta * (outcome.e_local - outcome.e_exe) / outcome.e_local
}

/// Reward for a URLLC task: faster than local and inside the deadline is
/// positive, a missed deadline pulls it negative.
///
/// Local execution is the neutral reference and scores exactly zero, even
/// though the deadline term alone would not vanish there.
pub fn urllc_reward(outcome: &ExecutionOutcome, deadline: f64, w: &RewardWeights) -> Result<f64> {
    if !(deadline > 0.0) {
        return Err(Error::invalid("deadline", format!("must be positive, got {deadline}")));
    }
    if !(outcome.t_local > 0.0) {
        return Err(Error::invalid("t_local", "must be positive"));
    }
    if outcome.t_exe == outcome.t_local {
        return Ok(0.0);
    }
    Ok(squash(urllc_score(outcome, deadline, w), w.delta))
}

/// Reward for an mMTC task: trades latency against device energy.
pub fn mmtc_reward(outcome: &ExecutionOutcome, w: &RewardWeights) -> Result<f64> {
    if !(outcome.t_local > 0.0) {
        return Err(Error::invalid("t_local", "must be positive"));
    }
    if !(outcome.e_local > 0.0) {
        return Err(Error::invalid("e_local", "must be positive"));
    }
    Ok(squash(mmtc_score(outcome, w), w.delta))
}

/// Slice-weighted per-task reward. Discounting across steps is the agents' job.
pub fn step_reward(
    slice: SliceId,
    outcome: &ExecutionOutcome,
    deadline: Option<f64>,
    w: &RewardWeights,
) -> Result<f64> {
    let r = match (slice, deadline) {
        (SliceId::Urllc, Some(tau)) => urllc_reward(outcome, tau, w)?,
        (SliceId::Mmtc, None) => mmtc_reward(outcome, w)?,
        (SliceId::Urllc, None) => return Err(Error::SliceMismatch("URLLC task without a deadline".into())),
        (SliceId::Mmtc, Some(_)) => return Err(Error::SliceMismatch("mMTC task with a deadline".into())),
    };
    Ok(w.slice_weight(slice) * r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pool {
    Communication,
    Computation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolViolation {
    pub pool: Pool,
    pub granted: u64,
    pub capacity: u32,
    pub overshoot: u64,
}

/// Outcome of auditing a set of grants against pool totals.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConstraintAudit {
    pub violations: Vec<PoolViolation>,
}

impl ConstraintAudit {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that the summed grants fit in both pool totals (inclusive).
pub fn check_pool_constraints<'a>(
    grants: impl IntoIterator<Item = &'a AllocationDecision>,
    pools: &ResourcePools,
) -> ConstraintAudit {
    let (comm, comp) = grants.into_iter().fold((0u64, 0u64), |(c, p), g| {
        (c + u64::from(g.k_comm), p + u64::from(g.k_comp))
    });
    let violations = [
        (Pool::Communication, comm, pools.comm_total),
        (Pool::Computation, comp, pools.comp_total),
    ]
    .into_iter()
    .filter(|&(_, granted, cap)| granted > u64::from(cap))
    .map(|(pool, granted, capacity)| PoolViolation {
        pool,
        granted,
        capacity,
        overshoot: granted - u64::from(capacity),
    })
    .collect();
    ConstraintAudit { violations }
}
