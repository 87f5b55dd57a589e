use rand::seq::IteratorRandom;

use crate::episode::{DecisionContext, ResourcePools};
use crate::error::{Error, Result};
use crate::seed::SimRng;

/// Maps a decision context to a menu index. Implementations must only return
/// indices marked feasible in `ctx.mask`.
pub trait Policy {
    fn name(&self) -> String;

    /// Called once per round, before the first decision.
    fn begin_episode(&mut self, _pools: &ResourcePools) {}

    fn act(&mut self, ctx: &DecisionContext<'_>, rng: &mut SimRng) -> Result<usize>;

    /// True when `act` ignores the rng.
    fn is_deterministic(&self) -> bool;
}

impl<P: Policy + ?Sized> Policy for Box<P> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn begin_episode(&mut self, pools: &ResourcePools) {
        (**self).begin_episode(pools)
    }

    fn act(&mut self, ctx: &DecisionContext<'_>, rng: &mut SimRng) -> Result<usize> {
        (**self).act(ctx, rng)
    }

    fn is_deterministic(&self) -> bool {
        (**self).is_deterministic()
    }
}

/// Always processes locally.
#[derive(Debug, Clone, Copy, Default)]
pub struct LocalOnly;

impl Policy for LocalOnly {
    fn name(&self) -> String {
        "local".into()
    }

    fn act(&mut self, ctx: &DecisionContext<'_>, _rng: &mut SimRng) -> Result<usize> {
        Ok(ctx.env.menu.local_index())
    }

    fn is_deterministic(&self) -> bool {
        true
    }
}

/// Uniform over feasible actions; used for audits.
#[derive(Debug, Clone, Copy, Default)]
pub struct RandomPolicy;

impl Policy for RandomPolicy {
    fn name(&self) -> String {
        "random".into()
    }

    fn act(&mut self, ctx: &DecisionContext<'_>, rng: &mut SimRng) -> Result<usize> {
        ctx.mask.feasible().choose(rng).ok_or(Error::AllMasked)
    }

    fn is_deterministic(&self) -> bool {
        false
    }
}
